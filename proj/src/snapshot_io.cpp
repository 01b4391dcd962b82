#include "afwl/snapshot_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "afwl/error.hpp"

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace afwl {

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is, ErrorKind kind) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(static_cast<bool>(is), kind, "truncated snapshot stream");
  return v;
}

ScalarField read_field_as(std::istream& is, double* t_out, ErrorKind kind) {
  char magic[4];
  is.read(magic, 4);
  require(is && std::memcmp(magic, "AFWL", 4) == 0, kind, "bad snapshot magic");
  const auto version = get<std::uint32_t>(is, kind);
  require(version == kSnapshotVersion, kind, "unsupported snapshot version " + std::to_string(version));
  Grid3 g;
  g.n = static_cast<int>(get<std::uint32_t>(is, kind));
  g.dx = get<double>(is, kind);
  const double t = get<double>(is, kind);
  require(g.n >= 2 && g.n <= 4096 && g.dx > 0.0, kind, "implausible snapshot header");
  ScalarField f(g);
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
  require(static_cast<bool>(is), kind, "truncated snapshot payload");
  if (t_out) *t_out = t;
  return f;
}

}  // namespace

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void write_field(std::ostream& os, const ScalarField& f, double t) {
  os.write("AFWL", 4);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.n));
  put<double>(os, f.grid.dx);
  put<double>(os, t);
  os.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
}

ScalarField read_field(std::istream& is, double* t_out) { return read_field_as(is, t_out, ErrorKind::Io); }

void write_state(const std::filesystem::path& path, const StateSlice& s) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + path.string());
  write_field(os, s.u, s.t);
  write_field(os, s.ut, s.t);
  require(static_cast<bool>(os), ErrorKind::Io, "write failed for " + path.string());
}

StateSlice read_state(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorKind::Io, "cannot open " + path.string());
  StateSlice s;
  s.u = read_field(is, &s.t);
  s.ut = read_field(is);
  require(s.u.grid == s.ut.grid, ErrorKind::Io, "u and u_t grids differ in " + path.string());
  return s;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  std::ostringstream body(std::ios::binary);
  write_field(body, c.state.u, c.state.t);
  write_field(body, c.state.ut, c.state.t);
  body.write("AFCK", 4);
  put<std::uint32_t>(body, kSnapshotVersion);
  put<std::uint64_t>(body, c.step);
  put<double>(body, c.dt);
  const std::string bytes = body.str();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), ErrorKind::Io, "cannot open " + path.string());
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  put<std::uint64_t>(os, fnv1a(bytes.data(), bytes.size()));
  require(static_cast<bool>(os), ErrorKind::Io, "write failed for " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  require(static_cast<bool>(file), ErrorKind::Io, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  constexpr auto kind = ErrorKind::ChecksumMismatch;
  require(bytes.size() > sizeof(std::uint64_t), kind, "checkpoint too short");
  const std::size_t body_len = bytes.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body_len, sizeof stored);
  require(stored == fnv1a(bytes.data(), body_len), kind, "checksum does not match " + path.string());

  std::istringstream is(bytes.substr(0, body_len), std::ios::binary);
  Checkpoint c;
  c.state.u = read_field_as(is, &c.state.t, kind);
  c.state.ut = read_field_as(is, nullptr, kind);
  require(c.state.u.grid == c.state.ut.grid, kind, "u and u_t grids differ");
  char magic[4];
  is.read(magic, 4);
  require(is && std::memcmp(magic, "AFCK", 4) == 0, kind, "bad checkpoint trailer");
  require(get<std::uint32_t>(is, kind) == kSnapshotVersion, kind, "unsupported checkpoint version");
  c.step = get<std::uint64_t>(is, kind);
  c.dt = get<double>(is, kind);
  return c;
}

}  // namespace afwl
