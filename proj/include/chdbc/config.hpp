// Run configuration: a single JSON file with nested sections. Parsing is
// strict: unknown keys, missing required fields, and out-of-range values are
// hard errors naming the offending field.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chdbc/diagnostics.hpp"
#include "chdbc/mesh.hpp"
#include "chdbc/solver.hpp"
#include "chdbc/velocity.hpp"

namespace chdbc {

enum class InitialKind { ConstantNoise, TanhProfile, File };

struct InitialConfig {
    InitialKind kind = InitialKind::ConstantNoise;
    double m0 = 0.0;
    double amplitude = 0.1;
    std::uint64_t seed = 1;
    std::string path;  // checkpoint path for kind = file
};

struct SweepConfig {
    std::string parameter;  // "eps" or "dt"
    std::vector<double> values;
};

struct RunConfig {
    int nx = 64, ny = 32;
    double lx = 6.0, ly = 4.0;
    PotentialPair potentials;
    double tau_omega = 1.0, tau_gamma = 1.0;
    VelocityField velocity = VelocityField::zero();
    InitialConfig initial;
    double dt = 1e-2;
    double t_end = 1.0;
    int sample_interval = 1;
    double newton_tol = 1e-10;
    int newton_max_iter = 30;
    double linear_tol = 1e-12;
    OmegaLimitTolerances omega;
    double energy_bound = 1e6;
    std::string csv_path = "diagnostics.csv";
    std::string checkpoint_path = "final.ckpt";
    std::string report_path = "report.json";
    std::optional<SweepConfig> sweep;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& text);

    StripMesh make_mesh() const;
    SolverConfig solver_config() const;
    // noise / tanh / checkpoint initial field per the `initial` section
    BulkSurfaceField build_initial_field(const StripMesh& mesh) const;
};

}  // namespace chdbc
