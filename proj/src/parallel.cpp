#include "afwl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "afwl/error.hpp"

namespace afwl {

namespace {
std::atomic<int> g_threads{1};
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::NonLorentzian: return "NonLorentzian";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::AnnulusOutOfDomain: return "AnnulusOutOfDomain";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::KernelTooLarge: return "KernelTooLarge";
    case ErrorKind::DurationTooShort: return "DurationTooShort";
    case ErrorKind::ZeroInitialEnergy: return "ZeroInitialEnergy";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ChecksumMismatch: return "ChecksumMismatch";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

void set_thread_count(int n) { g_threads.store(std::max(1, n)); }

int thread_count() { return g_threads.load(); }

namespace detail {

void run_chunks(std::size_t count, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), count);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&body, b, e] { body(b, e); });
  }
  body(0, std::min(count, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace detail
}  // namespace afwl
