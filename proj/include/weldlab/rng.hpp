#pragma once

#include <cstdint>
#include <random>

namespace weldlab {

// Deterministic per-replica random stream. Copying a stream duplicates its
// future output, which is how coupled samplers share noise.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t bits() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace weldlab
