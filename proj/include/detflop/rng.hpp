#pragma once

#include <cstdint>

namespace detflop {

// PCG64 (XSL-RR 128/64, "setseq" variant), fixed here so that seeded artifacts
// are reproducible byte for byte across platforms.
//
// Initialization from (seed, stream):
//   state = 0; inc = (stream << 1) | 1; step(); state += seed; step();
// Step: state = state * PCG_MULT_128 + inc  (mod 2^128).
// Output: rotr64( high64(state) ^ low64(state), state >> 122 ).
//
// Bounded draws use plain modulo: bounded(m) = next() % m. The modulo bias at
// m <= a few thousand is irrelevant here; determinism is what matters.
class Pcg64 {
 public:
  // Default stream used for coefficient tensors.
  static constexpr std::uint64_t kTensorStream = 0xda3e39cb94b95bdbULL;

  explicit Pcg64(std::uint64_t seed, std::uint64_t stream = kTensorStream) {
    state_ = 0;
    inc_ = ((static_cast<u128>(stream)) << 1) | 1u;
    step();
    state_ += static_cast<u128>(seed);
    step();
  }

  std::uint64_t next() {
    step();
    std::uint64_t xored = static_cast<std::uint64_t>(state_ >> 64) ^ static_cast<std::uint64_t>(state_);
    unsigned rot = static_cast<unsigned>(state_ >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
  }

  // Uniform in [0, m).
  std::uint64_t bounded(std::uint64_t m) { return next() % m; }

  // Uniform integer in [-bound, bound].
  long long symmetric(unsigned bound) {
    return static_cast<long long>(bounded(2ULL * bound + 1ULL)) - static_cast<long long>(bound);
  }

 private:
  using u128 = unsigned __int128;

  void step() {
    static constexpr u128 kMult = ((static_cast<u128>(0x2360ed051fc65da4ULL)) << 64) | 0x4385df649fccf645ULL;
    state_ = state_ * kMult + inc_;
  }

  u128 state_ = 0;
  u128 inc_ = 0;
};

// Derived streams keep independent seeded purposes out of each other's way.
enum : std::uint64_t {
  kStreamSampling = 0x853c49e6748fea9bULL,
  kStreamOracle = 0x9e3779b97f4a7c15ULL,
  kStreamDomain = 0xc2b2ae3d27d4eb4fULL,
  kStreamSlices = 0x165667b19e3779f9ULL,
};

}  // namespace detflop
