#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "soilctl/config.hpp"

namespace soilctl {

struct RunSummary {
    std::string name;
    std::uint64_t seed = 0;
    std::optional<double> total_cost_controlled;
    std::optional<double> total_cost_uncontrolled;
    std::optional<double> normalized_total_controlled;
    std::optional<double> normalized_total_uncontrolled;
    // uncontrolled / controlled, from the normalized totals.
    std::optional<double> cost_ratio;
    std::optional<double> final_mean_uptake_controlled;
    std::optional<double> final_mean_uptake_uncontrolled;
    double wall_seconds = 0.0;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long are_failures = 0;
};

struct RunOutputs {
    RunSummary summary;
    std::optional<SimulationRecord> controlled;
    std::optional<SimulationRecord> uncontrolled;
};

// Execute the experiment (both modes when configured), optionally persisting
// CSV/summary/log artifacts under out_dir (empty = no files).
RunOutputs run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          std::ostream* log = nullptr);

void write_csv(const SimulationRecord& rec, const std::string& path);
nlohmann::ordered_json summary_json(const ExperimentConfig& cfg, const RunOutputs& out);

// Sweep over a parameter grid. Spec format: "key=v1,v2;key2=a..b" with keys
// in {lambda, epsilon, n_nodes, seed}; "a..b" is an inclusive integer range.
struct SweepCell {
    std::map<std::string, double> overrides;
    std::string label;
};
std::vector<SweepCell> parse_grid(const std::string& spec);

struct SweepResult {
    std::vector<std::pair<SweepCell, RunSummary>> completed;
    std::vector<std::pair<SweepCell, std::string>> failed;
};
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<SweepCell>& cells,
                      const std::string& out_dir, int max_workers = 0);

} // namespace soilctl
