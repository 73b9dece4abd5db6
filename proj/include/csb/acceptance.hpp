#pragma once

#include <string>
#include <vector>

namespace csb {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    int workers = 0;          // 0 = auto
    std::vector<int> only;    // empty = run every criterion
    std::string scratch_dir = "."; // where determinism-check files land
};

// Runs the acceptance criteria and returns one result per criterion, in id
// order. Never throws: a criterion that errors out reports as failed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

std::string format_result_line(const CriterionResult& r);

} // namespace csb
