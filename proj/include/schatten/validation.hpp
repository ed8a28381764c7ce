#pragma once

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace schatten {

enum class ValidationLevel {
    /// Deterministic identities only.
    fast,
    /// Adds the Monte Carlo cross-checks.
    full,
};

struct ValidationOptions {
    ValidationLevel level = ValidationLevel::fast;
    std::uint64_t seed = 20240601;
    std::int64_t samples = 1000000;
    /// Criteria to run (1-10); empty runs every criterion the level allows.
    std::set<int> criteria;
    /// Fault injection: scales v_p inside the moment identity check.
    double v_p_scale = 1.0;
};

struct CheckRow {
    int criterion = 0;
    std::string check;
    bool pass = false;
    double measured = 0.0;
    double reference = 0.0;
    double tolerance = 0.0;
    std::string note;
    /// False for diagnostic rows that are reported but do not affect the verdict.
    bool gating = true;
};

struct CriterionVerdict {
    int criterion = 0;
    bool pass = false;
    double seconds = 0.0;  // wall time; not part of the JSON payload
};

struct ValidationReport {
    ValidationOptions options;
    std::vector<CheckRow> rows;
    std::vector<CriterionVerdict> verdicts;

    bool all_pass() const;
    std::vector<std::string> failed_checks() const;
    /// {config, rows, verdicts}. Contains nothing that varies between runs
    /// with the same options, so serialised reports compare byte for byte.
    nlohmann::ordered_json to_json() const;
};

/// Criteria that need Monte Carlo and therefore only run at the full level.
bool criterion_is_stochastic(int criterion);

ValidationReport run_validation(const ValidationOptions& options);

}  // namespace schatten
