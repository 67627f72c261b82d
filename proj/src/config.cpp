#include "chdbc/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chdbc/checkpoint.hpp"

namespace chdbc {

namespace {

using nlohmann::json;

// Section view that rejects unknown keys and reports missing ones by path.
class Section {
  public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object())
            throw ConfigError("config: section '" + path_ + "' must be an object");
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    std::string child_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& require(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key))
            throw ConfigError("config: missing required field '" + child_path(key) + "'");
        return j_.at(key);
    }

    template <class T>
    T get(const std::string& key) {
        try {
            return require(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("config: field '" + child_path(key) + "' has the wrong type");
        }
    }

    template <class T>
    T get_or(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        return get<T>(key);
    }

    Section subsection(const std::string& key) {
        return Section(require(key), child_path(key));
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError("config: unknown key '" + child_path(it.key()) + "'");
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

PotentialSpec parse_potential(Section sec) {
    const std::string kind = sec.get<std::string>("kind");
    PotentialSpec spec = PotentialSpec::regular();
    if (kind == "regular") {
        // no parameters
    } else if (kind == "logarithmic") {
        spec = PotentialSpec::logarithmic(sec.get_or<double>("c1", 2.0));
    } else if (kind == "double_obstacle") {
        spec = PotentialSpec::double_obstacle(sec.get_or<double>("c2", 1.0));
    } else if (kind == "polynomial") {
        spec = PotentialSpec::polynomial(sec.get<std::vector<double>>("coeffs"));
    } else {
        throw ConfigError("config: unknown potential kind '" + kind + "'");
    }
    sec.finish();
    return spec;
}

VelocityField parse_velocity(Section sec) {
    const std::string kind = sec.get<std::string>("kind");
    VelocityField v = VelocityField::zero();
    if (kind == "zero") {
        // no parameters
    } else if (kind == "decaying_shear") {
        v = VelocityField::decaying_shear(sec.get<double>("a0"), sec.get<double>("lambda"),
                                          sec.get_or<int>("k", 1));
    } else {
        throw ConfigError("config: unknown velocity kind '" + kind + "'");
    }
    sec.finish();
    return v;
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig cfg;
    Section top(root, "");

    {
        Section g = top.subsection("geometry");
        cfg.nx = g.get<int>("nx");
        cfg.ny = g.get<int>("ny");
        cfg.lx = g.get<double>("lx");
        cfg.ly = g.get<double>("ly");
        g.finish();
    }
    {
        Section p = top.subsection("potentials");
        cfg.potentials.bulk = parse_potential(p.subsection("bulk"));
        cfg.potentials.surface = parse_potential(p.subsection("surface"));
        cfg.potentials.eps = p.get_or<double>("eps", 1e-3);
        if (!(cfg.potentials.eps > 0.0))
            throw ConfigError("config: potentials.eps must be positive");
        p.finish();
    }
    {
        Section v = top.subsection("viscosity");
        cfg.tau_omega = v.get<double>("tau_omega");
        cfg.tau_gamma = v.get<double>("tau_gamma");
        if (!(cfg.tau_omega > 0.0))
            throw ConfigError("config: viscosity.tau_omega must be strictly positive");
        if (!(cfg.tau_gamma > 0.0))
            throw ConfigError("config: viscosity.tau_gamma must be strictly positive");
        v.finish();
    }
    if (top.has("velocity")) cfg.velocity = parse_velocity(top.subsection("velocity"));
    {
        Section ini = top.subsection("initial");
        const std::string kind = ini.get<std::string>("kind");
        if (kind == "constant_noise") {
            cfg.initial.kind = InitialKind::ConstantNoise;
            cfg.initial.m0 = ini.get<double>("m0");
            cfg.initial.amplitude = ini.get_or<double>("amplitude", 0.1);
            cfg.initial.seed = ini.get_or<std::uint64_t>("seed", 1);
        } else if (kind == "tanh_profile") {
            cfg.initial.kind = InitialKind::TanhProfile;
            cfg.initial.amplitude = ini.get_or<double>("amplitude", 1.0);
            cfg.initial.m0 = ini.get_or<double>("m0", 0.0);
        } else if (kind == "file") {
            cfg.initial.kind = InitialKind::File;
            cfg.initial.path = ini.get<std::string>("path");
        } else {
            throw ConfigError("config: unknown initial kind '" + kind + "'");
        }
        ini.finish();
    }
    {
        Section t = top.subsection("time");
        cfg.dt = t.get<double>("dt");
        cfg.t_end = t.get<double>("t_end");
        cfg.sample_interval = t.get_or<int>("sample_interval", 1);
        if (!(cfg.dt > 0.0)) throw ConfigError("config: time.dt must be positive");
        if (cfg.t_end < 0.0) throw ConfigError("config: time.t_end must be nonnegative");
        if (cfg.sample_interval < 1)
            throw ConfigError("config: time.sample_interval must be at least 1");
        t.finish();
    }
    if (top.has("tolerances")) {
        Section tol = top.subsection("tolerances");
        cfg.newton_tol = tol.get_or<double>("newton_tol", cfg.newton_tol);
        cfg.newton_max_iter = tol.get_or<int>("newton_max_iter", cfg.newton_max_iter);
        cfg.linear_tol = tol.get_or<double>("linear_tol", cfg.linear_tol);
        cfg.omega.staleness = tol.get_or<double>("staleness", cfg.omega.staleness);
        cfg.omega.distance = tol.get_or<double>("omega_distance", cfg.omega.distance);
        cfg.omega.flatness = tol.get_or<double>("omega_flatness", cfg.omega.flatness);
        cfg.energy_bound = tol.get_or<double>("energy_bound", cfg.energy_bound);
        tol.finish();
    }
    if (top.has("output")) {
        Section o = top.subsection("output");
        cfg.csv_path = o.get_or<std::string>("csv", cfg.csv_path);
        cfg.checkpoint_path = o.get_or<std::string>("checkpoint", cfg.checkpoint_path);
        cfg.report_path = o.get_or<std::string>("report", cfg.report_path);
        o.finish();
    }
    if (top.has("sweep")) {
        Section s = top.subsection("sweep");
        SweepConfig sweep;
        sweep.parameter = s.get<std::string>("parameter");
        sweep.values = s.get<std::vector<double>>("values");
        if (sweep.parameter != "eps" && sweep.parameter != "dt")
            throw ConfigError("config: sweep.parameter must be 'eps' or 'dt'");
        if (sweep.values.empty()) throw ConfigError("config: sweep.values is empty");
        s.finish();
        cfg.sweep = sweep;
    }
    top.finish();

    cfg.make_mesh();           // validates geometry
    cfg.solver_config().validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return from_string(ss.str());
}

StripMesh RunConfig::make_mesh() const { return build_strip_mesh(nx, ny, lx, ly); }

SolverConfig RunConfig::solver_config() const {
    SolverConfig sc;
    sc.tau_omega = tau_omega;
    sc.tau_gamma = tau_gamma;
    sc.dt = dt;
    sc.t_end = t_end;
    sc.newton_tol = newton_tol;
    sc.newton_max_iter = newton_max_iter;
    sc.linear_tol = linear_tol;
    return sc;
}

BulkSurfaceField RunConfig::build_initial_field(const StripMesh& mesh) const {
    BulkSurfaceField rho0 = BulkSurfaceField::zeros(mesh);
    switch (initial.kind) {
        case InitialKind::ConstantNoise: {
            std::mt19937_64 rng(initial.seed);
            std::uniform_real_distribution<double> dist(-initial.amplitude,
                                                        initial.amplitude);
            for (int k = 0; k < mesh.size(); ++k) rho0.values[k] = dist(rng);
            const double shift = initial.m0 - generalized_mean(mesh, rho0);
            rho0.values.array() += shift;
            // clamp into the interior of D(beta_Gamma) with a 1e-8 inset
            const Interval& dom = potentials.surface.beta_domain();
            if (std::isfinite(dom.lo) || std::isfinite(dom.hi)) {
                const double lo = std::isfinite(dom.lo) ? dom.lo + 1e-8 : -HUGE_VAL;
                const double hi = std::isfinite(dom.hi) ? dom.hi - 1e-8 : HUGE_VAL;
                for (int k = 0; k < mesh.size(); ++k)
                    rho0.values[k] = std::clamp(rho0.values[k], lo, hi);
            }
            break;
        }
        case InitialKind::TanhProfile: {
            const double width = std::sqrt(2.0);
            for (int j = 0; j < mesh.ny; ++j)
                for (int i = 0; i < mesh.nx; ++i)
                    rho0.at(i, j) =
                        initial.amplitude * std::tanh((mesh.y(j) - 0.5 * mesh.ly) / width);
            break;
        }
        case InitialKind::File: {
            const Checkpoint ckpt = load_checkpoint(initial.path);
            if (ckpt.nx != mesh.nx || ckpt.ny != mesh.ny)
                throw ConfigError("config: initial.path checkpoint grid " +
                                  std::to_string(ckpt.nx) + "x" + std::to_string(ckpt.ny) +
                                  " does not match the configured mesh");
            rho0.values = ckpt.rho;
            break;
        }
    }
    return rho0;
}

}  // namespace chdbc
