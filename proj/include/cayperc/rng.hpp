#pragma once

// Counter-based random numbers for the standard coupling.
//
// Every edge label is a pure function of (master seed, trial, stream, edge
// index), so labelings are reproducible bit for bit on any platform and under
// any thread schedule. The block function is Philox4x64-10 (Salmon et al.,
// "Parallel random numbers: as easy as 1, 2, 3", SC 2011).

#include <array>
#include <cstdint>

namespace cayperc {

class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static constexpr void mulhilo(std::uint64_t a, std::uint64_t b,
                                std::uint64_t& hi, std::uint64_t& lo) noexcept {
    __extension__ using Wide = unsigned __int128;
    const Wide product = static_cast<Wide>(a) * static_cast<Wide>(b);
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
  }

  static constexpr Counter single_round(const Counter& ctr, const Key& key) noexcept {
    std::uint64_t hi0 = 0, lo0 = 0, hi1 = 0, lo1 = 0;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    return {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
};

/// Maps the top 53 bits of a 64-bit word onto [0, 1).
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stream identifiers keep independent labelings of the same edge apart.
enum class LabelStream : std::uint64_t {
  Coupling = 0,      // x(e) of the standard coupling
  Environment = 1,   // second labeling used inside a sampled open subgraph
};

/// Uniform edge labels keyed on (master_seed, trial, stream).
class LabelSource {
 public:
  constexpr LabelSource(std::uint64_t master_seed, std::uint64_t trial,
                        LabelStream stream = LabelStream::Coupling) noexcept
      : seed_(master_seed), trial_(trial), stream_(static_cast<std::uint64_t>(stream)) {}

  constexpr double operator()(std::uint64_t edge_index) const noexcept {
    const auto out = Philox4x64::block({edge_index, trial_, stream_, 0},
                                       {seed_, kDomain});
    return to_unit_interval(out[0]);
  }

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t trial() const noexcept { return trial_; }

 private:
  // Separates edge-label draws from any other consumer of the same seed.
  static constexpr std::uint64_t kDomain = 0x6361797065726301ULL;

  std::uint64_t seed_;
  std::uint64_t trial_;
  std::uint64_t stream_;
};

}  // namespace cayperc
