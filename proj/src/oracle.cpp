#include "qkd/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qkd {
namespace {

constexpr std::array<FlagPair, 4> kFlags = {
    FlagPair{0, 0}, FlagPair{1, 0}, FlagPair{1, 1}, FlagPair{0, 1}};

// Pairing happens inside blocks of this size; the block boundaries are
// fixed by sample index, never by thread layout.
constexpr std::uint64_t kMcBlock = 1u << 16;

double component(const BellDiagonal& s, int i) {
  switch (i) {
    case 0: return s.q00;
    case 1: return s.q10;
    case 2: return s.q11;
    default: return s.q01;
  }
}

}  // namespace

std::uint64_t SplitMix64::next_below(std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
  std::uint64_t v = next();
  while (v >= limit) {
    v = next();
  }
  return v % n;
}

std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int flag_index(FlagPair f) {
  if (f.bit == 0) {
    return f.phase == 0 ? 0 : 3;
  }
  return f.phase == 0 ? 1 : 2;
}

FlagPair flag_of_index(int index) { return kFlags.at(index); }

BStepResult enumerate_b(const BellDiagonal& control,
                        const BellDiagonal& target) {
  double survival = 0.0;
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const FlagPair c = kFlags[i];
      const FlagPair t = kFlags[j];
      if (c.bit != t.bit) {
        continue;
      }
      const double w = component(control, i) * component(target, j);
      survival += w;
      out[flag_index({c.bit, static_cast<std::uint8_t>(c.phase ^ t.phase)})] += w;
    }
  }
  if (survival < 1e-300) {
    // Bits always disagree; no survivors to describe.
    return {0.0, {0.0, 0.0, 0.0, 0.0}};
  }
  return {survival,
          {out[0] / survival, out[1] / survival, out[2] / survival,
           out[3] / survival}};
}

BellDiagonal enumerate_p(const BellDiagonal& s) {
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        const FlagPair a = kFlags[i], b = kFlags[j], c = kFlags[k];
        const double w = component(s, i) * component(s, j) * component(s, k);
        const std::uint8_t bit = a.bit ^ b.bit ^ c.bit;
        const std::uint8_t phase = (a.phase + b.phase + c.phase) >= 2 ? 1 : 0;
        out[flag_index({bit, phase})] += w;
      }
    }
  }
  return {out[0], out[1], out[2], out[3]};
}

McSequenceResult mc_sequence(const BellDiagonal& s, std::string_view sequence,
                             std::uint64_t n_samples, std::uint64_t seed) {
  if (n_samples < 10'000) {
    throw std::invalid_argument("mc_sequence: need at least 1e4 samples");
  }
  for (char op : sequence) {
    if (op != 'B' && op != 'P') {
      throw std::invalid_argument("mc_sequence: sequence tokens must be B or P");
    }
  }
  const double c0 = s.q00;
  const double c1 = c0 + s.q10;
  const double c2 = c1 + s.q11;

  std::uint64_t survivors = 0;
  std::uint64_t bit_flags = 0;
  std::uint64_t phase_flags = 0;

  std::vector<FlagPair> pop;
  pop.reserve(kMcBlock);
  const std::uint64_t n_blocks = (n_samples + kMcBlock - 1) / kMcBlock;
  for (std::uint64_t block = 0; block < n_blocks; ++block) {
    const std::uint64_t begin = block * kMcBlock;
    const std::uint64_t end = std::min(n_samples, begin + kMcBlock);
    pop.clear();
    for (std::uint64_t i = begin; i < end; ++i) {
      SplitMix64 rng(split_stream(seed, i));
      const double u = rng.next_unit();
      int idx = u < c0 ? 0 : (u < c1 ? 1 : (u < c2 ? 2 : 3));
      pop.push_back(kFlags[idx]);
    }
    for (std::size_t step = 0; step < sequence.size(); ++step) {
      // Shuffle stream keyed by (seed, block, step); sample order within
      // a block never depends on anything else.
      SplitMix64 rng(
          split_stream(seed ^ 0xa5a5a5a5a5a5a5a5ULL, block * 64 + step));
      for (std::size_t i = pop.size(); i > 1; --i) {
        std::swap(pop[i - 1], pop[rng.next_below(i)]);
      }
      std::size_t out = 0;
      if (sequence[step] == 'B') {
        for (std::size_t i = 0; i + 1 < pop.size(); i += 2) {
          const FlagPair c = pop[i];
          const FlagPair t = pop[i + 1];
          if (c.bit == t.bit) {
            pop[out++] = {c.bit, static_cast<std::uint8_t>(c.phase ^ t.phase)};
          }
        }
      } else {
        for (std::size_t i = 0; i + 2 < pop.size(); i += 3) {
          const FlagPair a = pop[i], b = pop[i + 1], c = pop[i + 2];
          pop[out++] = {static_cast<std::uint8_t>(a.bit ^ b.bit ^ c.bit),
                        (a.phase + b.phase + c.phase) >= 2
                            ? std::uint8_t{1}
                            : std::uint8_t{0}};
        }
      }
      pop.resize(out);
      if (pop.empty()) {
        break;
      }
    }
    survivors += pop.size();
    for (const FlagPair& f : pop) {
      bit_flags += f.bit;
      phase_flags += f.phase;
    }
  }

  McSequenceResult result;
  result.survivors = survivors;
  const double n = static_cast<double>(n_samples);
  const double y = static_cast<double>(survivors) / n;
  result.yield = {y, std::sqrt(y * (1.0 - y) / n)};
  if (survivors == 0) {
    result.inconclusive = true;
    return result;
  }
  const double m = static_cast<double>(survivors);
  const double pb = static_cast<double>(bit_flags) / m;
  const double pp = static_cast<double>(phase_flags) / m;
  result.bit_error = {pb, std::sqrt(pb * (1.0 - pb) / m)};
  result.phase_error = {pp, std::sqrt(pp * (1.0 - pp) / m)};
  return result;
}

}  // namespace qkd
