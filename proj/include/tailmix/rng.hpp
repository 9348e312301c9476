#ifndef TAILMIX_RNG_HPP
#define TAILMIX_RNG_HPP

#include <cstdint>

namespace tailmix {

/// Counter-based uniform generator. Output i of stream s under seed k is a
/// pure function mix(h(k, s) + i * gamma), so any (seed, stream) pair can be
/// evaluated independently and in parallel while reproducing byte-identical
/// sequences regardless of thread count or evaluation order.
///
/// The mixer is the 64-bit SplitMix finalizer, which is statistically sound
/// for the Monte Carlo volumes used here.
class RngStream {
 public:
  static RngStream keyed(std::uint64_t seed, std::uint64_t stream) {
    RngStream r;
    r.base_ = mix(mix(seed + kGolden) ^ mix(stream + kLeap));
    r.ctr_ = 0;
    return r;
  }

  std::uint64_t next_u64() { return mix(base_ + (++ctr_) * kGolden); }

  /// Uniform on the open interval (0, 1): 53-bit mantissa, offset by half an
  /// ulp so 0 and 1 are unreachable (safe as an inverse-CDF argument).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
  static constexpr std::uint64_t kLeap = 0xD1B54A32D192ED03ull;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t base_ = 0;
  std::uint64_t ctr_ = 0;
};

}  // namespace tailmix

#endif  // TAILMIX_RNG_HPP
