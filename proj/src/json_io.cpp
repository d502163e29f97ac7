#include "pdsplit/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace pdsplit {

using nlohmann::json;

namespace {
json require(const json& j, const char* key) {
    if (!j.contains(key)) throw SpecError(std::string("missing field '") + key + "'");
    return j.at(key);
}
}  // namespace

Vec vec_from_json(const json& j) {
    if (!j.is_array()) throw SpecError("expected a numeric array");
    Vec v;
    for (const auto& e : j) {
        if (!e.is_number()) throw SpecError("expected a numeric array");
        v.push_back(e.get<double>());
    }
    return v;
}

Mat mat_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw SpecError("expected a matrix (array of rows)");
    std::vector<Vec> rows;
    for (const auto& r : j) rows.push_back(vec_from_json(r));
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw SpecError("ragged matrix rows");
    return Mat::from_rows(rows);
}

MonotoneOp operator_from_json(const json& j) {
    std::string kind = require(j, "kind").get<std::string>();
    try {
        if (kind == "zero") return zero_op(require(j, "dim").get<int>());
        if (kind == "scaled_identity")
            return scaled_identity(require(j, "dim").get<int>(),
                                   require(j, "alpha").get<double>());
        if (kind == "linear") return linear_monotone(mat_from_json(require(j, "matrix")));
        if (kind == "normal_cone_affine") {
            Vec offset = vec_from_json(require(j, "offset"));
            Mat basis = j.contains("basis") && !j.at("basis").empty()
                            ? adjoint(mat_from_json(j.at("basis")))
                            : Mat(static_cast<int>(offset.size()), 0);
            return normal_cone_affine(SetDesc::affine(offset, basis));
        }
        if (kind == "normal_cone_box")
            return normal_cone_box(vec_from_json(require(j, "lo")),
                                   vec_from_json(require(j, "hi")));
        if (kind == "projection") {
            int dim = require(j, "dim").get<int>();
            Mat basis = j.contains("basis") && !j.at("basis").empty()
                            ? adjoint(mat_from_json(j.at("basis")))
                            : Mat(dim, 0);
            return projection_op(basis, dim);
        }
        if (kind == "constant") return constant_op(vec_from_json(require(j, "vector")));
        if (kind == "shifted_l1") {
            Vec shift = vec_from_json(require(j, "shift"));
            return shifted_l1_subdiff(static_cast<int>(shift.size()),
                                      require(j, "lambda").get<double>(), shift);
        }
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("invalid operator parameters: ") + e.what());
    }
    throw SpecError("unknown operator kind '" + kind + "'");
}

Triple triple_from_json(const json& j, double sigma_override, double tau_override) {
    double sigma = j.contains("sigma") ? j.at("sigma").get<double>() : 1.0;
    double tau = j.contains("tau") ? j.at("tau").get<double>() : 1.0;
    if (sigma_override > 0) sigma = sigma_override;
    if (tau_override > 0) tau = tau_override;
    MonotoneOp A = operator_from_json(require(j, "A"));
    try {
        if (j.contains("parts")) {
            std::vector<ProductPart> parts;
            for (const auto& p : j.at("parts"))
                parts.push_back(
                    {mat_from_json(require(p, "L")), operator_from_json(require(p, "B"))});
            return product_triple(std::move(A), std::move(parts), sigma, tau);
        }
        Mat L = mat_from_json(require(j, "L"));
        MonotoneOp B = operator_from_json(require(j, "B"));
        return make_triple(std::move(A), std::move(L), std::move(B), sigma, tau);
    } catch (const std::invalid_argument& e) {
        throw SpecError(std::string("invalid problem spec: ") + e.what());
    }
}

Triple triple_from_file(const std::string& path, double sigma_override,
                        double tau_override) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SpecError(std::string("spec is not valid JSON: ") + e.what());
    }
    return triple_from_json(j, sigma_override, tau_override);
}

SetDesc set_from_json(const json& j) {
    std::string variant = require(j, "variant").get<std::string>();
    if (variant == "empty") return SetDesc::empty(require(j, "dim").get<int>());
    if (variant == "whole") return SetDesc::whole(require(j, "dim").get<int>());
    if (variant == "point") return SetDesc::point(vec_from_json(require(j, "v")));
    if (variant == "affine") {
        Vec offset = vec_from_json(require(j, "offset"));
        Mat basis = j.contains("basis") && !j.at("basis").empty()
                        ? adjoint(mat_from_json(j.at("basis")))
                        : Mat(static_cast<int>(offset.size()), 0);
        return SetDesc::affine(offset, basis);
    }
    if (variant == "subspace") {
        int dim = require(j, "dim").get<int>();
        Mat basis = j.contains("basis") && !j.at("basis").empty()
                        ? adjoint(mat_from_json(j.at("basis")))
                        : Mat(dim, 0);
        return SetDesc::subspace(basis, dim);
    }
    if (variant == "box")
        return SetDesc::box(vec_from_json(require(j, "lo")), vec_from_json(require(j, "hi")));
    if (variant == "ray_product") {
        std::vector<Ray> rays;
        for (const auto& r : require(j, "rays")) {
            std::string s = r.get<std::string>();
            if (s == "zero") rays.push_back(Ray::Zero);
            else if (s == "nonneg") rays.push_back(Ray::NonNeg);
            else if (s == "nonpos") rays.push_back(Ray::NonPos);
            else if (s == "free") rays.push_back(Ray::Free);
            else throw SpecError("unknown ray '" + s + "'");
        }
        return SetDesc::ray_product(rays);
    }
    throw SpecError("unknown set variant '" + variant + "'");
}

json mat_to_json(const Mat& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows; ++i) {
        json r = json::array();
        for (int j = 0; j < m.cols; ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

json set_to_json(const SetDesc& s) {
    json j;
    j["variant"] = s.variant_name();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetDesc::Empty> ||
                          std::is_same_v<T, SetDesc::Whole>) {
                j["dim"] = v.dim;
            } else if constexpr (std::is_same_v<T, SetDesc::Point>) {
                j["v"] = v.v;
            } else if constexpr (std::is_same_v<T, SetDesc::Affine>) {
                j["offset"] = v.offset;
                j["basis"] = mat_to_json(adjoint(v.basis));  // rows = basis vectors
                j["dim_affine"] = v.basis.cols;
            } else if constexpr (std::is_same_v<T, SetDesc::Box>) {
                j["lo"] = v.lo;
                j["hi"] = v.hi;
            } else if constexpr (std::is_same_v<T, SetDesc::RayProduct>) {
                json rays = json::array();
                for (Ray r : v.rays) {
                    switch (r) {
                        case Ray::Zero: rays.push_back("zero"); break;
                        case Ray::NonNeg: rays.push_back("nonneg"); break;
                        case Ray::NonPos: rays.push_back("nonpos"); break;
                        case Ray::Free: rays.push_back("free"); break;
                    }
                }
                j["rays"] = rays;
            } else {
                j["C"] = mat_to_json(v.C);
                j["d"] = v.d;
                j["E"] = mat_to_json(v.E);
                j["f"] = v.f;
            }
        },
        s.variant());
    return j;
}

json theorem_report_json(const std::vector<TheoremCheck>& checks) {
    json arr = json::array();
    for (const TheoremCheck& c : checks)
        arr.push_back({{"theorem_id", c.id},
                       {"hypothesis_holds", c.hypothesis_holds},
                       {"conclusion_verified", c.conclusion_verified},
                       {"witnesses", c.note}});
    return arr;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(const std::string& path, const IterTrace& trace, int primal_dim,
                     int dual_dim) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "iter,residual";
    for (int i = 0; i < primal_dim; ++i) out << ",x" << i;
    for (int i = 0; i < dual_dim; ++i) out << ",y" << i;
    out << "\n";
    // iterate 0 is the start (no residual yet)
    for (size_t k = 0; k < trace.iterates.size(); ++k) {
        out << k << ",";
        if (k == 0)
            out << "";
        else
            out << format_double(trace.residuals[k - 1]);
        for (double c : trace.iterates[k]) out << "," << format_double(c);
        out << "\n";
    }
}

void write_matrix_csv(const std::string& path, const Mat& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            if (j) out << ",";
            out << format_double(m(i, j));
        }
        out << "\n";
    }
}

}  // namespace pdsplit
