#include "soilctl/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

namespace soilctl {

using json = nlohmann::ordered_json;

const char* to_string(RunMode m) {
    switch (m) {
        case RunMode::controlled: return "controlled";
        case RunMode::uncontrolled: return "uncontrolled";
        case RunMode::both: return "both";
    }
    return "both";
}

RunMode run_mode_from_string(const std::string& s) {
    if (s == "controlled") return RunMode::controlled;
    if (s == "uncontrolled") return RunMode::uncontrolled;
    if (s == "both") return RunMode::both;
    throw_error(errc::bad_config, "mode must be controlled|uncontrolled|both, got '" + s + "'");
}

namespace {

json schedule_to_json(const Schedule& s) {
    if (s.is_constant()) return s.knots().front().second;
    json arr = json::array();
    for (const auto& [x, v] : s.knots()) arr.push_back(json::array({x, v}));
    return arr;
}

Schedule schedule_from_json(const json& j, const char* what) {
    if (j.is_number()) return Schedule(j.get<double>());
    if (j.is_array()) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& e : j) {
            if (!e.is_array() || e.size() != 2)
                throw_error(errc::bad_config, std::string(what) + ": knots must be [x, value] pairs");
            pts.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        return Schedule(std::move(pts));
    }
    throw_error(errc::bad_config, std::string(what) + ": expected number or [[x, value], ...]");
}

json model_to_json(const HydraulicModel& m) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            json j;
            if constexpr (std::is_same_v<T, HaverkampParams>) {
                j["type"] = "haverkamp";
                j["K_S"] = p.K_S;
                j["A"] = p.A_const;
                j["alpha"] = p.alpha;
                j["theta_S"] = p.theta_S;
                j["theta_r"] = p.theta_r;
                j["beta1"] = p.beta1;
                j["beta2"] = p.beta2;
            } else if constexpr (std::is_same_v<T, GardnerParams>) {
                j["type"] = "gardner";
                j["rho"] = p.rho;
                j["K_S"] = p.K_S;
                j["theta_S"] = p.theta_S;
                j["theta_r"] = p.theta_r;
            } else {
                j["type"] = "linear";
                j["K0"] = p.K0;
                j["C0"] = p.C0;
                j["theta0"] = p.theta0;
            }
            return j;
        },
        m);
}

HydraulicModel model_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "haverkamp") {
        HaverkampParams p{};
        p.K_S = j.at("K_S").get<double>();
        p.A_const = j.at("A").get<double>();
        p.alpha = j.at("alpha").get<double>();
        p.theta_S = j.at("theta_S").get<double>();
        p.theta_r = j.at("theta_r").get<double>();
        p.beta1 = j.at("beta1").get<double>();
        p.beta2 = j.at("beta2").get<double>();
        return p;
    }
    if (type == "gardner") {
        GardnerParams p{};
        p.rho = j.at("rho").get<double>();
        p.K_S = j.at("K_S").get<double>();
        p.theta_S = j.at("theta_S").get<double>();
        p.theta_r = j.at("theta_r").get<double>();
        return p;
    }
    if (type == "linear") {
        LinearParams p{};
        p.K0 = j.at("K0").get<double>();
        p.C0 = j.at("C0").get<double>();
        p.theta0 = j.at("theta0").get<double>();
        return p;
    }
    throw_error(errc::bad_config, "model.type must be haverkamp|gardner|linear, got '" + type + "'");
}

} // namespace

void ExperimentConfig::validate() const {
    soilctl::validate(model);
    feddes.validate();
    grid.validate();
    if (!(horizon > 0.0)) throw_error(errc::bad_config, "horizon must be positive");
    if (!(lambda > 0.0)) throw_error(errc::bad_config, "lambda must be positive");
    noise.validate();
    IntegratorConfig tmp = integrator;
    tmp.t_end = horizon;
    tmp.validate();
}

SemidiscreteSystem ExperimentConfig::make_system() const {
    SemidiscreteSystem sys;
    sys.grid = grid;
    sys.model = model;
    sys.feddes = feddes;
    sys.boundary = boundary;
    sys.use_null_augmentation = use_null_augmentation;
    return sys;
}

CostModel ExperimentConfig::make_cost_model() const {
    CostModel cm;
    cm.feddes = feddes;
    cm.dz = grid.dz();
    cm.lambda = lambda;
    cm.include_fixed_bottom_node = include_fixed_bottom_node;
    return cm;
}

IntegratorConfig ExperimentConfig::make_integrator(ControlMode cmode) const {
    IntegratorConfig ic = integrator;
    ic.t_end = horizon;
    ic.control_mode = cmode;
    return ic;
}

NoiseConfig ExperimentConfig::make_noise() const {
    NoiseConfig n = noise;
    n.seed = seed;
    return n;
}

json ExperimentConfig::to_json() const {
    json j;
    j["name"] = name;
    j["model"] = model_to_json(model);
    j["feddes"] = {{"h1", feddes.h1}, {"h2", feddes.h2},       {"h3", feddes.h3},
                   {"h4", feddes.h4}, {"S_max", feddes.S_max}};
    j["grid"] = {{"depth_cm", grid.depth}, {"n_nodes", grid.n_nodes}};
    j["boundary"] = {{"h_top_initial", boundary.h_top_initial},
                     {"h_bottom", schedule_to_json(boundary.h_bottom)},
                     {"h_initial", schedule_to_json(boundary.h_initial)}};
    j["horizon"] = horizon;
    j["lambda"] = lambda;
    j["mode"] = to_string(mode);
    j["use_null_augmentation"] = use_null_augmentation;
    j["include_fixed_bottom_node"] = include_fixed_bottom_node;
    j["noise"] = {{"enabled", noise.enabled},
                  {"epsilon", noise.epsilon},
                  {"plant_only", noise.plant_only}};
    j["controller"] = {
        {"law", integrator.sdre.law == ControlLaw::tracking ? "tracking" : "quadratic"},
        {"tracking_weight", integrator.sdre.tracking_weight},
        {"are_tol", integrator.sdre.are_tol}};
    j["integrator"] = {{"dt_init", integrator.dt_init},
                       {"dt_min", integrator.dt_min},
                       {"dt_max", integrator.dt_max},
                       {"newton_tol", integrator.newton_tol},
                       {"newton_max_iter", integrator.newton_max_iter},
                       {"step_rtol", integrator.step_rtol},
                       {"step_atol", integrator.step_atol},
                       {"boundary_move_cap", integrator.boundary_move_cap}};
    j["seed"] = seed;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    try {
        c.name = j.value("name", std::string("custom"));
        c.model = model_from_json(j.at("model"));
        const json& f = j.at("feddes");
        c.feddes = FeddesParams{f.at("h1").get<double>(), f.at("h2").get<double>(),
                                f.at("h3").get<double>(), f.at("h4").get<double>(),
                                f.at("S_max").get<double>()};
        const json& g = j.at("grid");
        c.grid.depth = g.at("depth_cm").get<double>();
        c.grid.n_nodes = g.at("n_nodes").get<int>();
        const json& b = j.at("boundary");
        c.boundary.h_top_initial = b.at("h_top_initial").get<double>();
        c.boundary.h_bottom = schedule_from_json(b.at("h_bottom"), "boundary.h_bottom");
        c.boundary.h_initial = schedule_from_json(b.at("h_initial"), "boundary.h_initial");
        c.horizon = j.at("horizon").get<double>();
        c.lambda = j.at("lambda").get<double>();
        c.mode = run_mode_from_string(j.value("mode", std::string("both")));
        c.use_null_augmentation = j.value("use_null_augmentation", true);
        c.include_fixed_bottom_node = j.value("include_fixed_bottom_node", true);
        if (j.contains("noise")) {
            const json& n = j.at("noise");
            c.noise.enabled = n.value("enabled", false);
            c.noise.epsilon = n.value("epsilon", 0.0);
            c.noise.plant_only = n.value("plant_only", false);
        }
        if (j.contains("controller")) {
            const json& ctl = j.at("controller");
            const std::string law = ctl.value("law", std::string("tracking"));
            if (law == "tracking") c.integrator.sdre.law = ControlLaw::tracking;
            else if (law == "quadratic") c.integrator.sdre.law = ControlLaw::quadratic;
            else throw_error(errc::bad_config, "controller.law must be tracking|quadratic");
            c.integrator.sdre.tracking_weight = ctl.value("tracking_weight", 1.0);
            c.integrator.sdre.are_tol = ctl.value("are_tol", 1e-9);
        }
        if (j.contains("integrator")) {
            const json& i = j.at("integrator");
            c.integrator.dt_init = i.value("dt_init", c.integrator.dt_init);
            c.integrator.dt_min = i.value("dt_min", c.integrator.dt_min);
            c.integrator.dt_max = i.value("dt_max", c.integrator.dt_max);
            c.integrator.newton_tol = i.value("newton_tol", c.integrator.newton_tol);
            c.integrator.newton_max_iter = i.value("newton_max_iter", c.integrator.newton_max_iter);
            c.integrator.step_rtol = i.value("step_rtol", c.integrator.step_rtol);
            c.integrator.step_atol = i.value("step_atol", c.integrator.step_atol);
            c.integrator.boundary_move_cap =
                i.value("boundary_move_cap", c.integrator.boundary_move_cap);
        }
        c.seed = j.value("seed", std::uint64_t{42});
    } catch (const json::exception& e) {
        throw_error(errc::bad_config, e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_error(errc::bad_config, "cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // map byte offset to line:column for the diagnostic
        std::size_t line = 1, col = 1;
        for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
            if (text[k] == '\n') { ++line; col = 1; }
            else ++col;
        }
        throw_error(errc::bad_config, path + ":" + std::to_string(line) + ":" +
                                          std::to_string(col) + ": " + e.what());
    }
    return from_json(j);
}

std::string ExperimentConfig::dump() const { return to_json().dump(2) + "\n"; }

std::vector<std::string> preset_names() { return {"test1", "test2", "test3", "test4"}; }

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    c.feddes = FeddesParams{0.0, -30.0, -50.0, -80.0, 1.25e-4};
    c.grid = Grid{80.0, 31};
    c.boundary.h_top_initial = -20.73;
    c.boundary.h_bottom = Schedule(-61.5);
    c.boundary.h_initial = Schedule(-61.5);
    c.horizon = 1000.0;
    c.lambda = 1e-5;
    c.mode = RunMode::both;
    c.seed = 42;

    const HaverkampParams haverkamp{34.0, 1.175e6, 1.611e6, 0.287, 0.075, 4.74, 3.96};
    const GardnerParams gardner{0.1, 1.0, 0.48, 0.0};

    if (name == "test1") {
        c.model = haverkamp;
    } else if (name == "test2") {
        c.model = haverkamp;
        c.noise.enabled = true;
        c.noise.epsilon = 1e-5;
    } else if (name == "test3") {
        c.model = gardner;
    } else if (name == "test4") {
        c.model = gardner;
        c.noise.enabled = true;
        c.noise.epsilon = 1e-6;
    } else {
        throw_error(errc::bad_config, "unknown preset '" + name + "' (test1..test4)");
    }
    return c;
}

} // namespace soilctl
