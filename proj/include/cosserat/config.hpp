#ifndef COSSERAT_CONFIG_HPP
#define COSSERAT_CONFIG_HPP

#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "cosserat/dynamics.hpp"
#include "cosserat/experiments.hpp"
#include "cosserat/rodmodel.hpp"
#include "cosserat/statics.hpp"

// JSON experiment configuration for the `run` subcommand. Unknown keys are
// rejected; every error names the offending key path.

namespace cosserat {

using Json = nlohmann::json;

enum class SolveType { Static, Dynamic };

struct ExperimentConfig {
    std::string name = "generic";
    InterpolationKind kind = InterpolationKind::SE3;
    int order = 1;
    int n_el = 8;
    Integration integration = Integration::Reduced;
    SectionProperties section;
    double length = 1.0;
    Vec3 direction = Vec3::UnitX();
    LoadCase loads;
    bool cantilever_tip = false; // derive tip loads from k_b and length
    std::vector<int> clamp_nodes;
    std::vector<std::pair<int, double>> fixed;
    SolveType solve_type = SolveType::Static;
    StaticSettings static_settings;
    DynamicSettings dynamic_settings;
    int trajectory_samples = 200;
    std::string state_path;
    std::string trajectory_path;
    std::string energy_path;
};

namespace detail {

inline void require_keys(const Json& j, const std::string& path,
                         const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw ConfigError(path + "/" + key, "unknown key");
}

template <typename T>
T get_as(const Json& j, const std::string& path) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        throw ConfigError(path, "wrong value type");
    }
}

inline Vec3 get_vec3(const Json& j, const std::string& path) {
    const auto v = get_as<std::vector<double>>(j, path);
    if (v.size() != 3) throw ConfigError(path, "expected 3 components");
    return {v[0], v[1], v[2]};
}

inline InterpolationKind parse_kind(const std::string& s,
                                    const std::string& path) {
    if (s == "r12") return InterpolationKind::R12;
    if (s == "r3so3") return InterpolationKind::R3xSO3;
    if (s == "se3") return InterpolationKind::SE3;
    throw ConfigError(path, "expected one of r12, r3so3, se3");
}

inline BoundaryLoad parse_boundary_load(const Json& j,
                                        const std::string& path) {
    require_keys(j, path, {"components", "frame"});
    if (!j.contains("components"))
        throw ConfigError(path + "/components", "missing");
    BoundaryLoad load;
    load.force = get_vec3(j.at("components"), path + "/components");
    if (j.contains("frame")) {
        const auto frame =
            get_as<std::string>(j.at("frame"), path + "/frame");
        if (frame == "body") load.follower = true;
        else if (frame != "inertial")
            throw ConfigError(path + "/frame", "expected inertial or body");
    }
    return load;
}

} // namespace detail

inline ExperimentConfig parse_config(const Json& j) {
    using detail::get_as;
    using detail::get_vec3;
    using detail::require_keys;

    detail::require_keys(j, "", {"experiment", "kind", "order", "n_el",
                                 "integration", "section", "geometry", "loads",
                                 "bc", "solver", "output"});
    ExperimentConfig cfg;
    if (j.contains("experiment"))
        cfg.name = get_as<std::string>(j.at("experiment"), "experiment");
    if (!j.contains("kind")) throw ConfigError("kind", "missing");
    cfg.kind = detail::parse_kind(get_as<std::string>(j.at("kind"), "kind"),
                                  "kind");
    if (j.contains("order")) cfg.order = get_as<int>(j.at("order"), "order");
    if (cfg.order != 1 && cfg.order != 2)
        throw ConfigError("order", "expected 1 or 2");
    if (cfg.kind != InterpolationKind::R12 && cfg.order != 1)
        throw ConfigError("order", "r3so3 and se3 require order 1");
    if (!j.contains("n_el")) throw ConfigError("n_el", "missing");
    cfg.n_el = get_as<int>(j.at("n_el"), "n_el");
    if (cfg.n_el < 1) throw ConfigError("n_el", "must be >= 1");
    if (j.contains("integration")) {
        const auto mode =
            get_as<std::string>(j.at("integration"), "integration");
        if (mode == "full") cfg.integration = Integration::Full;
        else if (mode == "reduced") cfg.integration = Integration::Reduced;
        else throw ConfigError("integration", "expected full or reduced");
    }

    if (!j.contains("section")) throw ConfigError("section", "missing");
    {
        const Json& s = j.at("section");
        require_keys(s, "section",
                     {"type", "radius", "width", "height", "density",
                      "youngs_modulus", "shear_modulus", "stiffness_scale"});
        const auto need = [&](const char* key) -> double {
            if (!s.contains(key))
                throw ConfigError(std::string("section/") + key, "missing");
            return get_as<double>(s.at(key), std::string("section/") + key);
        };
        const auto type = s.contains("type")
                              ? get_as<std::string>(s.at("type"), "section/type")
                              : std::string("circular");
        const double rho0 = need("density");
        const double E = need("youngs_modulus");
        const double G = need("shear_modulus");
        if (type == "circular") {
            cfg.section = section_circular(need("radius"), rho0, E, G);
        } else if (type == "rectangular") {
            cfg.section = section_rectangular(need("width"), need("height"),
                                              rho0, E, G);
        } else {
            throw ConfigError("section/type",
                              "expected circular or rectangular");
        }
        if (s.contains("stiffness_scale")) {
            const double scale =
                get_as<double>(s.at("stiffness_scale"), "section/stiffness_scale");
            cfg.section.law.C_gamma *= scale;
            cfg.section.law.C_kappa *= scale;
        }
    }

    if (!j.contains("geometry")) throw ConfigError("geometry", "missing");
    {
        const Json& g = j.at("geometry");
        require_keys(g, "geometry", {"type", "length", "direction"});
        if (g.contains("type") &&
            get_as<std::string>(g.at("type"), "geometry/type") != "straight")
            throw ConfigError("geometry/type", "expected straight");
        if (!g.contains("length")) throw ConfigError("geometry/length", "missing");
        cfg.length = get_as<double>(g.at("length"), "geometry/length");
        if (g.contains("direction"))
            cfg.direction = get_vec3(g.at("direction"), "geometry/direction");
    }

    if (j.contains("loads")) {
        const Json& l = j.at("loads");
        require_keys(l, "loads",
                     {"distributed_force", "distributed_moment", "tip_force",
                      "tip_moment", "root_force", "root_moment",
                      "cantilever_tip"});
        if (l.contains("distributed_force"))
            cfg.loads.distributed_force =
                get_vec3(l.at("distributed_force"), "loads/distributed_force");
        if (l.contains("distributed_moment"))
            cfg.loads.distributed_moment = get_vec3(
                l.at("distributed_moment"), "loads/distributed_moment");
        if (l.contains("tip_force"))
            cfg.loads.at_end = detail::parse_boundary_load(l.at("tip_force"),
                                                           "loads/tip_force");
        if (l.contains("tip_moment"))
            cfg.loads.at_end.moment =
                get_vec3(l.at("tip_moment"), "loads/tip_moment");
        if (l.contains("root_force")) {
            const Vec3 moment = cfg.loads.at_start.moment;
            cfg.loads.at_start = detail::parse_boundary_load(
                l.at("root_force"), "loads/root_force");
            cfg.loads.at_start.moment = moment;
        }
        if (l.contains("root_moment"))
            cfg.loads.at_start.moment =
                get_vec3(l.at("root_moment"), "loads/root_moment");
        if (l.contains("cantilever_tip"))
            cfg.cantilever_tip =
                get_as<bool>(l.at("cantilever_tip"), "loads/cantilever_tip");
    }

    if (j.contains("bc")) {
        const Json& b = j.at("bc");
        require_keys(b, "bc", {"clamp_nodes", "fix"});
        if (b.contains("clamp_nodes"))
            cfg.clamp_nodes =
                get_as<std::vector<int>>(b.at("clamp_nodes"), "bc/clamp_nodes");
        if (b.contains("fix")) {
            if (!b.at("fix").is_array())
                throw ConfigError("bc/fix", "expected an array");
            for (const auto& entry : b.at("fix")) {
                require_keys(entry, "bc/fix", {"index", "value"});
                if (!entry.contains("index"))
                    throw ConfigError("bc/fix/index", "missing");
                cfg.fixed.emplace_back(
                    get_as<int>(entry.at("index"), "bc/fix/index"),
                    entry.contains("value")
                        ? get_as<double>(entry.at("value"), "bc/fix/value")
                        : 0.0);
            }
        }
    }

    if (j.contains("solver")) {
        const Json& s = j.at("solver");
        require_keys(s, "solver",
                     {"type", "n_load_steps", "atol", "rtol", "max_iterations",
                      "t_end", "dt_initial", "fixed_dt", "complement_update",
                      "samples"});
        const auto type = s.contains("type")
                              ? get_as<std::string>(s.at("type"), "solver/type")
                              : std::string("static");
        if (type == "static") cfg.solve_type = SolveType::Static;
        else if (type == "dynamic") cfg.solve_type = SolveType::Dynamic;
        else throw ConfigError("solver/type", "expected static or dynamic");
        if (s.contains("n_load_steps"))
            cfg.static_settings.n_load_steps =
                get_as<int>(s.at("n_load_steps"), "solver/n_load_steps");
        if (s.contains("max_iterations"))
            cfg.static_settings.max_iterations =
                get_as<int>(s.at("max_iterations"), "solver/max_iterations");
        if (s.contains("atol")) {
            cfg.static_settings.atol = get_as<double>(s.at("atol"), "solver/atol");
            cfg.dynamic_settings.atol = cfg.static_settings.atol;
        }
        if (s.contains("rtol"))
            cfg.dynamic_settings.rtol = get_as<double>(s.at("rtol"), "solver/rtol");
        if (s.contains("t_end"))
            cfg.dynamic_settings.t_end =
                get_as<double>(s.at("t_end"), "solver/t_end");
        if (s.contains("dt_initial"))
            cfg.dynamic_settings.dt_initial =
                get_as<double>(s.at("dt_initial"), "solver/dt_initial");
        if (s.contains("fixed_dt"))
            cfg.dynamic_settings.fixed_dt =
                get_as<double>(s.at("fixed_dt"), "solver/fixed_dt");
        if (s.contains("complement_update"))
            cfg.dynamic_settings.complement_update = get_as<bool>(
                s.at("complement_update"), "solver/complement_update");
        if (s.contains("samples"))
            cfg.trajectory_samples =
                get_as<int>(s.at("samples"), "solver/samples");
    }

    if (j.contains("output")) {
        const Json& o = j.at("output");
        require_keys(o, "output", {"state", "trajectory", "energy"});
        if (o.contains("state"))
            cfg.state_path = get_as<std::string>(o.at("state"), "output/state");
        if (o.contains("trajectory"))
            cfg.trajectory_path =
                get_as<std::string>(o.at("trajectory"), "output/trajectory");
        if (o.contains("energy"))
            cfg.energy_path =
                get_as<std::string>(o.at("energy"), "output/energy");
    }
    return cfg;
}

} // namespace cosserat

#endif
