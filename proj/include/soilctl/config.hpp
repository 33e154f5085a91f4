#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "soilctl/integrate.hpp"

namespace soilctl {

enum class RunMode { controlled, uncontrolled, both };

const char* to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

struct ExperimentConfig {
    std::string name = "custom";
    HydraulicModel model = GardnerParams{0.1, 1.0, 0.48, 0.0};
    FeddesParams feddes{0.0, -30.0, -50.0, -80.0, 1.25e-4};
    Grid grid;
    BoundaryData boundary;
    double horizon = 1000.0;
    double lambda = 1e-5;
    RunMode mode = RunMode::both;
    bool use_null_augmentation = true;
    bool include_fixed_bottom_node = true;
    NoiseConfig noise;
    IntegratorConfig integrator;
    std::uint64_t seed = 42;

    void validate() const;

    SemidiscreteSystem make_system() const;
    CostModel make_cost_model() const;
    IntegratorConfig make_integrator(ControlMode mode) const;
    NoiseConfig make_noise() const;

    nlohmann::ordered_json to_json() const;
    static ExperimentConfig from_json(const nlohmann::ordered_json& j);
    static ExperimentConfig load_file(const std::string& path);
    std::string dump() const; // canonical serialized form (2-space indent)
};

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

} // namespace soilctl
