#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace fraclog {

struct SuiteConfig {
    std::uint64_t seed = 20240601;
    int graphs = 20;
    int max_vertices = 40;
    int lattice_inputs = 5;
    int window = 6;
    std::vector<int> criteria;  // empty runs 1..15
};

inline constexpr int suite_criterion_count = 15;

struct CriterionOutcome {
    int id = 0;
    std::string name;
    bool pass = false;
    nlohmann::ordered_json details;
};

// One acceptance criterion, deterministic in the config. Throws InputError for
// an unknown id.
CriterionOutcome run_criterion(int id, const SuiteConfig& config);

struct SuiteReport {
    std::vector<CriterionOutcome> outcomes;
    bool all_pass = false;
    bool discrepancy = false;  // blow-up constant flag from criterion 14
};

SuiteReport run_suite(const SuiteConfig& config);

// Stable JSON rendering: version, resolved config, one entry per criterion. No timings.
nlohmann::ordered_json to_json(const SuiteReport& report, const SuiteConfig& config);

}  // namespace fraclog
