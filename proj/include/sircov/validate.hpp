#pragma once

#include <string>
#include <vector>

namespace sircov {

enum class ValidateLevel { Fast, Full };

struct CheckResult {
    std::string id;      // criterion number
    std::string name;
    std::string detail;  // measured numbers, worst cases, runtime
    bool pass = false;
    double seconds = 0.0;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    std::string to_csv() const;
};

// Runs the acceptance suite. Fast trims trial counts and grids to smoke-test
// scale; Full runs every criterion at its stated size and tolerance.
ValidationReport run_validation(ValidateLevel level, int threads = 0);

}  // namespace sircov
