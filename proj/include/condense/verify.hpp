#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace condense {

struct VerifyOptions {
    /// Test hook: perturbs the closed-form gradient before comparison, so the
    /// gradient suite must fail.
    bool corrupt_gradient = false;
    /// Suites to run by name; empty runs all of them.
    std::vector<std::string> suites;
};

struct SuiteResult {
    std::string name;
    int criterion = 0;
    bool passed = false;
    std::vector<std::string> details;   // one deterministic line per case group
    std::vector<std::string> failures;  // identifiers of failing cases
};

struct VerifyReport {
    std::vector<SuiteResult> suites;

    bool passed() const;
    /// One status line per suite followed by its detail lines. Contains no
    /// timings, so identical seeds give identical text.
    std::string summary() const;
};

/// Suite names in criterion order: gradients, line_counts, polynomial_output,
/// case2_sweep, case1_alignment, pq_scaling, decomposition, initial_stage,
/// multiplicity.
std::vector<std::string> suite_names();

/// Runs one suite. Throws ConfigError for an unknown name.
SuiteResult run_suite(std::string_view name, const VerifyOptions& options = {});

VerifyReport run_verify(const VerifyOptions& options = {});

}  // namespace condense
