#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace lsoup {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// The 128-bit counter is split into a 64-bit block index and a 64-bit stream
/// id, so any (key, stream) pair names an independent, reproducible sequence
/// and no state needs to be shared between workers.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in (0, 1).
  double uniform();

  static Block bijection(Block counter, Key key);

 private:
  void refill();

  Key key_;
  std::uint64_t block_ = 0;
  std::uint64_t stream_;
  Block buffer_{};
  int used_ = 4;
};

using Rng = Philox4x32;

/// Mixes a list of integers into one 64-bit stream id (splitmix64 chain).
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts);

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  return Rng(seed, stream_id(parts));
}

}  // namespace lsoup
