#pragma once

#include <string>
#include <vector>

#include "strengthlab/exec.hpp"

namespace strengthlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // one-line outcome
    std::string report;  // deterministic measured values (no timing)
    double elapsed_ms = 0.0;
};

// Acceptance criteria 1..10; each is deterministic in (id, cfg.budget) and
// never in cfg.threads.
CriterionResult run_criterion(int id, const ExecConfig& cfg);
std::vector<CriterionResult> run_all_criteria(const ExecConfig& cfg);

// Stable names accepted by the `suite` subcommand.
const std::vector<std::pair<int, std::string>>& criterion_names();
int criterion_id_from_name(const std::string& name);  // -1 if unknown

}  // namespace strengthlab
