#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pdsplit/battery.hpp"
#include "pdsplit/instances.hpp"
#include "pdsplit/json_io.hpp"
#include "pdsplit/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pdsplit;

namespace {

enum LogLevel { kError = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("PDSPLIT_LOG");
    if (!env) return kError;
    std::string v = env;
    if (v == "debug") return kDebug;
    if (v == "info") return kInfo;
    return kError;
}

void log_info(const std::string& msg) {
    if (log_level() >= kInfo) std::cerr << "[pdsplit] " << msg << "\n";
}

struct CommonOpts {
    std::string spec;
    double sigma = -1.0, tau = -1.0;
    double tol = 1e-9;
    int max_iter = 100000;
    uint64_t seed = 42;
    std::string out_dir = ".";
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << "\n";
}

int cmd_solve(const CommonOpts& o) {
    Triple t;
    try {
        t = triple_from_file(o.spec, o.sigma, o.tau);
    } catch (const SpecError& e) {
        std::cerr << "pdsplit solve: " << e.what() << "\n";
        return 2;
    }
    IterateOptions opt;
    opt.max_iter = o.max_iter;
    opt.tol = o.tol;
    opt.store_iterates = true;
    log_info("solving " + o.spec);
    IterTrace tr = iterate_full(t, zeros(t.primal_dim()), zeros(t.dual_dim()), opt);

    fs::create_directories(o.out_dir);
    write_trace_csv((fs::path(o.out_dir) / "trace.csv").string(), tr, t.primal_dim(),
                    t.dual_dim());
    json summary;
    summary["converged"] = tr.converged;
    summary["iterations"] = tr.iterations;
    summary["final_residual"] = tr.residuals.empty() ? 0.0 : tr.residuals.back();
    summary["x"] = tr.x;
    summary["y"] = tr.y;
    summary["saddle_residual"] = saddle_residual(t, tr.x, tr.y);
    summary["seed"] = o.seed;
    write_json(fs::path(o.out_dir) / "summary.json", summary);
    if (!tr.converged) {
        std::cerr << "pdsplit solve: not converged after " << tr.iterations
                  << " iterations\n";
        return 3;
    }
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& only) {
    std::vector<CheckResult> results;
    try {
        results = run_battery(only, o.seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "pdsplit verify: " << e.what() << "\n";
        return 2;
    }
    bool all = true;
    for (const CheckResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name
                  << (r.detail.empty() ? "" : "  [" + r.detail + "]") << "\n";
        all = all && r.pass;
    }
    fs::create_directories(o.out_dir);
    write_json(fs::path(o.out_dir) / "verify_report.json", battery_report(results, o.seed));
    if (only.empty()) {
        // conditional-theorem report on the two bundled structured instances
        json reports = json::array();
        {
            Mat L = Mat::identity(2);
            L(1, 1) = 2.0;
            Triple t = ex_zero_id_instance(L);
            json r;
            r["instance"] = "zero_id_injective";
            r["checks"] = theorem_report_json(conditional_theorem_suite(
                t, SetDesc::point(zeros(2)), SetDesc::point(zeros(2))));
            reports.push_back(r);
        }
        {
            FeasInstance dr = dr_subspace_instance();
            json r;
            r["instance"] = "dr_subspace";
            r["checks"] = theorem_report_json(conditional_theorem_suite(dr.t, dr.Z, dr.K));
            reports.push_back(r);
        }
        write_json(fs::path(o.out_dir) / "theorem_report.json", reports);
    }
    return all ? 0 : 1;
}

int cmd_factor(const CommonOpts& o, const std::string& kind_name) {
    Triple t;
    try {
        t = triple_from_file(o.spec, o.sigma, o.tau);
    } catch (const SpecError& e) {
        std::cerr << "pdsplit factor: " << e.what() << "\n";
        return 2;
    }
    FactorKind kind = FactorKind::General;
    if (kind_name == "cholesky") kind = FactorKind::GeneralCholesky;
    else if (kind_name == "isometry") kind = FactorKind::ScaledIsometry;
    else if (kind_name == "dr") kind = FactorKind::DouglasRachford;
    else if (kind_name != "general") {
        std::cerr << "pdsplit factor: unknown kind '" << kind_name << "'\n";
        return 2;
    }
    Factor f;
    try {
        f = build_factor(t, kind);
    } catch (const std::invalid_argument& e) {
        std::cerr << "pdsplit factor: " << e.what() << "\n";
        return 4;
    }
    fs::create_directories(o.out_dir);
    write_matrix_csv((fs::path(o.out_dir) / "factor_C.csv").string(), f.C);
    if (f.R) write_matrix_csv((fs::path(o.out_dir) / "factor_R.csv").string(), *f.R);

    // certificate ||CC* - M||
    const int n = t.primal_dim(), m = t.dual_dim();
    Mat M(n + m, n + m);
    for (int i = 0; i < n; ++i) M(i, i) = 1.0 / t.sigma;
    for (int i = 0; i < m; ++i) M(n + i, n + i) = 1.0 / t.tau;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
            M(n + i, j) = -t.L(i, j);
            M(j, n + i) = -t.L(i, j);
        }
    double cert = frobenius(mat_add(matmul(f.C, adjoint(f.C)), negated(M)));
    json cj;
    cj["factorization_error"] = cert;
    cj["kind"] = kind_name;
    cj["reduced_dim"] = f.reduced_dim();
    cj["has_R_block"] = f.R.has_value();
    write_json(fs::path(o.out_dir) / "factor_certificate.json", cj);
    return 0;
}

int cmd_lasso(const std::string& L_file, const std::string& b_file, double lambda,
              const CommonOpts& o) {
    Mat L;
    Vec b;
    try {
        std::ifstream lf(L_file);
        if (!lf) throw SpecError("cannot open --L-file '" + L_file + "'");
        std::vector<Vec> rows;
        std::string line;
        while (std::getline(lf, line)) {
            if (line.empty()) continue;
            Vec row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
            rows.push_back(row);
        }
        if (rows.empty()) throw SpecError("--L-file is empty");
        L = Mat::from_rows(rows);
        std::ifstream bf(b_file);
        if (!bf) throw SpecError("cannot open --b-file '" + b_file + "'");
        while (std::getline(bf, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) b.push_back(std::stod(cell));
        }
        if (static_cast<int>(b.size()) != L.rows)
            throw SpecError("b length does not match L rows");
        if (lambda <= 0) throw SpecError("--lambda must be positive");
    } catch (const std::exception& e) {
        std::cerr << "pdsplit lasso: " << e.what() << "\n";
        return 2;
    }

    LassoInstance inst = lasso_instance(L, b, lambda);
    IterateOptions opt;
    opt.max_iter = o.max_iter;
    opt.tol = std::min(o.tol, 1e-11);
    IterTrace tr = iterate_full(inst.t, zeros(L.cols), zeros(L.rows), opt);
    json out;
    out["k"] = tr.y;
    out["mu"] = primal_value(inst.f, inst.g, L, tr.x);
    out["mu_star"] = dual_value(inst.f, inst.g, L, tr.y);
    out["gap"] = out["mu"].get<double>() + out["mu_star"].get<double>();
    out["seed"] = o.seed;
    try {
        out["Z_description"] = set_to_json(lasso_solution_set(L, b, lambda, tr.y));
    } catch (const std::invalid_argument& e) {
        out["Z_description"] = nullptr;
        out["Z_error"] = e.what();
    }
    fs::create_directories(o.out_dir);
    write_json(fs::path(o.out_dir) / "lasso.json", out);
    std::cout << out.dump(2) << "\n";
    return tr.converged ? 0 : 3;
}

int cmd_feasibility(const CommonOpts& o) {
    json j;
    SetDesc U, V;
    std::vector<SetDesc> Vs;
    std::vector<Mat> Ls;
    try {
        std::ifstream in(o.spec);
        if (!in) throw SpecError("cannot open spec '" + o.spec + "'");
        in >> j;
        U = set_from_json(j.at("U"));
        if (j.contains("parts")) {
            for (const auto& p : j.at("parts")) {
                Vs.push_back(set_from_json(p.at("V")));
                Ls.push_back(mat_from_json(p.at("L")));
            }
        } else {
            Vs.push_back(set_from_json(j.at("V")));
            Ls.push_back(mat_from_json(j.at("L")));
        }
    } catch (const std::exception& e) {
        std::cerr << "pdsplit feasibility: " << e.what() << "\n";
        return 2;
    }
    try {
        FeasibilitySets fs_sets = feasibility_sets(U, Vs, Ls, 1e-9);
        json out;
        out["Z"] = set_to_json(fs_sets.Z);
        out["K"] = set_to_json(fs_sets.K);
        fs::create_directories(o.out_dir);
        write_json(fs::path(o.out_dir) / "feasibility.json", out);
        std::cout << out.dump(2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "pdsplit feasibility: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"primal-dual splitting toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string only, factor_kind = "general";
    std::string lasso_L, lasso_b;
    double lasso_lambda = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_spec) {
        if (needs_spec) cmd->add_option("--spec", o.spec, "problem spec JSON")->required();
        cmd->add_option("--sigma", o.sigma, "override sigma");
        cmd->add_option("--tau", o.tau, "override tau");
        cmd->add_option("--tol", o.tol, "convergence tolerance");
        cmd->add_option("--max-iter", o.max_iter, "iteration cap");
        cmd->add_option("--seed", o.seed, "PRNG seed");
        cmd->add_option("--out", o.out_dir, "output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "iterate the CP operator on a spec");
    add_common(solve, true);
    CLI::App* verify = app.add_subcommand("verify", "run the bundled invariant battery");
    add_common(verify, false);
    verify->add_option("--only", only, "run a single named check");
    CLI::App* factor = app.add_subcommand("factor", "emit C (and R) with CC* = M");
    add_common(factor, true);
    factor->add_option("--kind", factor_kind, "general|cholesky|isometry|dr");
    CLI::App* lasso = app.add_subcommand("lasso", "solve a LASSO instance");
    lasso->add_option("--L-file", lasso_L, "CSV matrix")->required();
    lasso->add_option("--b-file", lasso_b, "CSV vector")->required();
    lasso->add_option("--lambda", lasso_lambda, "l1 weight")->required();
    add_common(lasso, false);

    CLI::App* feas = app.add_subcommand("feasibility", "exact Z and K for feasibility data");
    add_common(feas, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (verify->parsed()) return cmd_verify(o, only);
        if (factor->parsed()) return cmd_factor(o, factor_kind);
        if (lasso->parsed()) return cmd_lasso(lasso_L, lasso_b, lasso_lambda, o);
        if (feas->parsed()) return cmd_feasibility(o);
    } catch (const std::exception& e) {
        std::cerr << "pdsplit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
