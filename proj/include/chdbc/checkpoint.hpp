// Binary state checkpoints: format-versioned dump of (grid, t, rho, mu) as
// little-endian doubles. Reloading reproduces the State bit for bit.
#pragma once

#include <string>

#include "chdbc/mesh.hpp"
#include "chdbc/solver.hpp"

namespace chdbc {

struct Checkpoint {
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    double t = 0.0;
    Eigen::VectorXd rho, mu;
};

void save_checkpoint(const std::string& path, const StripMesh& mesh, const State& state);
Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the State (zeta recomputed from rho) after validating the grid.
State state_from_checkpoint(const Checkpoint& ckpt, const StripMesh& mesh,
                            const PotentialPair& pots);

}  // namespace chdbc
