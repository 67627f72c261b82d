#include "chdbc/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

namespace chdbc {

namespace {

constexpr char kMagic[8] = {'C', 'H', 'D', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_raw(std::ofstream& os, const void* p, size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void read_raw(std::ifstream& is, void* p, size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (!is) throw IoError("checkpoint: truncated file");
}

}  // namespace

void save_checkpoint(const std::string& path, const StripMesh& mesh, const State& state) {
    check_shape(mesh, state.rho);
    check_shape(mesh, state.mu);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("checkpoint: cannot open '" + path + "' for writing");
    write_raw(os, kMagic, sizeof(kMagic));
    write_raw(os, &kVersion, sizeof(kVersion));
    const std::int32_t nx = mesh.nx, ny = mesh.ny;
    write_raw(os, &nx, sizeof(nx));
    write_raw(os, &ny, sizeof(ny));
    write_raw(os, &mesh.lx, sizeof(double));
    write_raw(os, &mesh.ly, sizeof(double));
    write_raw(os, &state.t, sizeof(double));
    write_raw(os, state.rho.values.data(), sizeof(double) * mesh.size());
    write_raw(os, state.mu.values.data(), sizeof(double) * mesh.size());
    if (!os) throw IoError("checkpoint: write to '" + path + "' failed");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("checkpoint: cannot open '" + path + "'");
    char magic[8];
    read_raw(is, magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError("checkpoint: bad magic in '" + path + "'");
    std::uint32_t version = 0;
    read_raw(is, &version, sizeof(version));
    if (version != kVersion)
        throw IoError("checkpoint: unsupported format version " + std::to_string(version));
    Checkpoint c;
    std::int32_t nx = 0, ny = 0;
    read_raw(is, &nx, sizeof(nx));
    read_raw(is, &ny, sizeof(ny));
    c.nx = nx;
    c.ny = ny;
    read_raw(is, &c.lx, sizeof(double));
    read_raw(is, &c.ly, sizeof(double));
    read_raw(is, &c.t, sizeof(double));
    if (nx <= 0 || ny <= 0 || nx * ny <= 0)
        throw IoError("checkpoint: corrupt grid sizes");
    c.rho.resize(nx * ny);
    c.mu.resize(nx * ny);
    read_raw(is, c.rho.data(), sizeof(double) * c.rho.size());
    read_raw(is, c.mu.data(), sizeof(double) * c.mu.size());
    return c;
}

State state_from_checkpoint(const Checkpoint& ckpt, const StripMesh& mesh,
                            const PotentialPair& pots) {
    if (ckpt.nx != mesh.nx || ckpt.ny != mesh.ny || ckpt.lx != mesh.lx ||
        ckpt.ly != mesh.ly)
        throw ConfigError("checkpoint grid does not match the configured mesh");
    State s;
    s.rho = BulkSurfaceField::zeros(mesh);
    s.rho.values = ckpt.rho;
    s.mu = BulkSurfaceField::zeros(mesh);
    s.mu.values = ckpt.mu;
    s.zeta = BulkSurfaceField::zeros(mesh);
    for (int k = 0; k < mesh.size(); ++k)
        s.zeta.values[k] = pots.bulk.yosida(pots.eps, s.rho.values[k]);
    s.t = ckpt.t;
    return s;
}

}  // namespace chdbc
