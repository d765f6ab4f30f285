#pragma once

// Stateless, seedable randomness. Every random quantity in the project is a
// pure function of (master_seed, site, draw index, stream tag) through the
// SplitMix64 finalizer, so any module or thread can query the same value
// bit-reproducibly on any platform.

#include <cstdint>

namespace rwre::rng {

// SplitMix64 finalizer (Steele/Lea/Vigna constants).
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL;

// Zig-zag encode a signed coordinate to an unsigned integer.
inline constexpr std::uint64_t zigzag(std::int64_t v) {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Fold d signed coordinates into one 64-bit key via multiply-xor.
inline std::uint64_t site_key(const std::int32_t* c, int d) {
    std::uint64_t k = 0x243F6A8885A308D3ULL;  // pi fraction, arbitrary fixed start
    for (int i = 0; i < d; ++i) {
        k ^= zigzag(c[i]);
        k *= GOLDEN;
        k ^= k >> 29;
    }
    return k;
}

// Stream tags separating independent uses of the same (seed, site) pair.
enum : std::uint64_t {
    STREAM_ENV      = 0x656E76ULL,   // base environment weights
    STREAM_RESAMPLE = 0x726573ULL,   // single-site resampling
    STREAM_PATH     = 0x706174ULL,   // walk steps
    STREAM_HOLD     = 0x686F6CULL,   // exponential holding times
    STREAM_GENERIC  = 0x67656EULL,
};

inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t key,
                              std::uint64_t index, std::uint64_t stream) {
    std::uint64_t s = mix64(seed + stream * GOLDEN);
    return mix64(s ^ key ^ (index * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL));
}

// Uniform in the open interval (0,1); never returns 0 or 1, safe under log().
inline double draw_uniform(std::uint64_t seed, std::uint64_t key,
                           std::uint64_t index, std::uint64_t stream) {
    const std::uint64_t r = draw_u64(seed, key, index, stream) >> 11;  // 53 bits
    return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
}

// Small sequential generator for Monte Carlo paths: counter mode over a fixed key.
class Sequence {
  public:
    Sequence(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed + stream * GOLDEN)), n_(0) {}
    double uniform() {
        const std::uint64_t r = mix64(state_ ^ (n_++ * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL)) >> 11;
        return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
    }
  private:
    std::uint64_t state_;
    std::uint64_t n_;
};

}  // namespace rwre::rng
