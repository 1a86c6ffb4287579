#pragma once

#include <cstdint>
#include <string_view>

#include "qkd/bell.hpp"

namespace qkd {

// SplitMix64 (Steele, Lea & Flood). Deterministic given the seed; a
// separate stream per sample index keeps results independent of how
// the work is sharded.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in {0, ..., n-1} by rejection.
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

// Stream key for (seed, index): one mixing round keeps streams decorrelated.
std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index);

// Classical error flags of a Bell-diagonal pair.
struct FlagPair {
  std::uint8_t bit{};
  std::uint8_t phase{};
};

// (bit, phase) -> component index under the 00, 10, 11, 01 ordering.
int flag_index(FlagPair f);
FlagPair flag_of_index(int index);

// Exact sum over the 16 joint flag configurations of a bilateral XOR:
// accept iff the bit flags agree; the survivor keeps the control's bit
// flag and the XOR of both phase flags.
BStepResult enumerate_b(const BellDiagonal& control, const BellDiagonal& target);

// Exact sum over the 64 trio configurations: output bit is the XOR of
// the three bits, output phase the majority of the three phases.
BellDiagonal enumerate_p(const BellDiagonal& s);

struct McEstimate {
  double value{};
  double std_error{};
};

struct McSequenceResult {
  McEstimate yield;
  McEstimate bit_error;
  McEstimate phase_error;
  std::uint64_t survivors{};
  bool inconclusive{};  // surviving population emptied
};

// Samples flag ensembles and runs the classical B/P rules with random
// pairing inside fixed-size blocks, so the output is bit-identical for
// a given seed regardless of worker count.
McSequenceResult mc_sequence(const BellDiagonal& s, std::string_view sequence,
                             std::uint64_t n_samples, std::uint64_t seed);

}  // namespace qkd
