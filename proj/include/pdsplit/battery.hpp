#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace pdsplit {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// The bundled invariant battery behind `pdsplit verify`. `only` filters by
// exact check name (empty = run everything).
std::vector<CheckResult> run_battery(const std::string& only = "", uint64_t seed = 42);

nlohmann::json battery_report(const std::vector<CheckResult>& results, uint64_t seed);

std::vector<std::string> battery_check_names();

}  // namespace pdsplit
