#pragma once

#include <string>
#include <vector>

namespace spectrafrac {

// One validation criterion of the `validate` suite. Budgets and tolerances
// are fixed in code; detail carries the measured numbers for the log line.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0;
    std::string detail;
};

// Runs the full validation suite. Deterministic: fixed seeds throughout.
std::vector<CriterionResult> run_acceptance(unsigned jobs = 0);

bool all_passed(const std::vector<CriterionResult>& results);

// "PASS  3 cantor-measure-dimension  (1.24s) dim_H=0.6309 ..." per line.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace spectrafrac
