#pragma once

#include <string>

#include <json.hpp>

#include "pdsplit/oracle.hpp"
#include "pdsplit/solutions.hpp"
#include "pdsplit/splitting.hpp"

namespace pdsplit {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {"kind": "...", ...params}
MonotoneOp operator_from_json(const nlohmann::json& j);
Mat mat_from_json(const nlohmann::json& j);
Vec vec_from_json(const nlohmann::json& j);

// { "A": {...}, "L": [[...]], "B": {...}, "sigma": s, "tau": t }
// or the product form with "A", "sigma", "tau" and "parts": [{"L":..., "B":...}].
// sigma/tau overrides (when >= 0) replace the spec's values.
Triple triple_from_json(const nlohmann::json& j, double sigma_override = -1.0,
                        double tau_override = -1.0);
Triple triple_from_file(const std::string& path, double sigma_override = -1.0,
                        double tau_override = -1.0);

SetDesc set_from_json(const nlohmann::json& j);
nlohmann::json set_to_json(const SetDesc& s);

// {"theorem_id", "hypothesis_holds", "conclusion_verified", "witnesses"}
nlohmann::json theorem_report_json(const std::vector<TheoremCheck>& checks);

nlohmann::json mat_to_json(const Mat& m);

// trace.csv: header, then one row per iteration with 17 significant digits.
void write_trace_csv(const std::string& path, const IterTrace& trace, int primal_dim,
                     int dual_dim);
void write_matrix_csv(const std::string& path, const Mat& m);

std::string format_double(double v);  // %.17g

}  // namespace pdsplit
