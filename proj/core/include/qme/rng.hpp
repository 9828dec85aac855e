// rng.hpp — Philox4x64-10 counter-based generator with explicit stream splitting
//
// Every random draw in the library is a pure function of (seed, stream, counter),
// so disorder ensembles are reproducible for any thread count and evaluation
// order. Streams are split by packing a module tag and sample indices into the
// second key word; see stream_for().

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace qme {

class Philox {
  public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key_{seed, stream}, ctr_{0, 0, 0, 0} {}

    std::uint64_t next_u64() {
        if (buf_pos_ == 4) {
            block();
            buf_pos_ = 0;
        }
        return buf_[buf_pos_++];
    }

    // Uniform on (0, 1]; never returns 0 so log() is safe.
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; one spare value is cached.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
        const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    void block() {
        std::array<std::uint64_t, 4> x = ctr_;
        std::uint64_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, x[0], hi0, lo0);
            mulhilo(kMul1, x[2], hi1, lo1);
            x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        buf_ = x;
        if (++ctr_[0] == 0 && ++ctr_[1] == 0 && ++ctr_[2] == 0) ++ctr_[3];
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> ctr_;
    std::array<std::uint64_t, 4> buf_{};
    int buf_pos_ = 4;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stream-splitting rule: sample index XORed with a module tag placed in the
// high bits. Distinct (tag, size, sample) triples map to distinct streams.
namespace stream_tag {
inline constexpr std::uint64_t gue = 0x677565ULL << 40;       // "gue"
inline constexpr std::uint64_t anderson = 0x616e64ULL << 40;  // "and"
inline constexpr std::uint64_t pattern = 0x706174ULL << 40;   // "pat"
inline constexpr std::uint64_t ensemble = 0x656e73ULL << 40;  // "ens"
} // namespace stream_tag

inline Philox stream_for(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    return Philox(seed, tag ^ index);
}

// Ensemble per-sample derivation: base ⊕ (size << 32) ⊕ sample, fields kept
// disjoint so no two (size, sample) pairs collide.
inline std::uint64_t ensemble_sample_seed(std::uint64_t base, std::uint64_t size, std::uint64_t sample) {
    return base ^ (size << 32) ^ sample;
}

} // namespace qme
