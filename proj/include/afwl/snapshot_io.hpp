#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "afwl/grid.hpp"

namespace afwl {

constexpr std::uint32_t kSnapshotVersion = 1;

/// Binary block: "AFWL", u32 version, u32 n, f64 dx, f64 t, then n^3 f64, all
/// little-endian.
void write_field(std::ostream& os, const ScalarField& f, double t);
ScalarField read_field(std::istream& is, double* t_out = nullptr);

/// Two blocks, u then u_t.
void write_state(const std::filesystem::path& path, const StateSlice& s);
StateSlice read_state(const std::filesystem::path& path);

struct Checkpoint {
  StateSlice state;
  std::uint64_t step = 0;
  double dt = 0.0;
};

/// State blocks followed by the trailer "AFCK", u32 version, u64 step, f64 dt,
/// u64 FNV-1a hash of every preceding byte. Any mismatch on read throws
/// ChecksumMismatch.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t seed = 1469598103934665603ULL);

}  // namespace afwl
