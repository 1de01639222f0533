#pragma once

#include <cstdint>
#include <numbers>
#include <cmath>

namespace chaosdual {

/// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
/// Each (seed, stream) pair is an independent stream; streams can be created
/// in any order on any thread and always produce the same sequence, which is
/// what makes batch simulation reproducible independently of the thread count.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream) {
        const std::uint64_t mixed = splitmix64(seed);
        key0_ = static_cast<std::uint32_t>(mixed);
        key1_ = static_cast<std::uint32_t>(mixed >> 32);
        ctr_[0] = 0;
        ctr_[1] = 0;
        ctr_[2] = static_cast<std::uint32_t>(stream);
        ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
        pos_ = 4;
    }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            refill();
        }
        return out_[pos_++];
    }

    /// Uniform on (0, 1] with 53 random bits.
    double next_uniform() {
        const std::uint64_t lo = next_u32();
        const std::uint64_t hi = next_u32();
        const std::uint64_t bits = ((hi << 32) | lo) >> 11;
        return static_cast<double>(bits + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    static void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void refill() {
        std::uint32_t c0 = ctr_[0];
        std::uint32_t c1 = ctr_[1];
        std::uint32_t c2 = ctr_[2];
        std::uint32_t c3 = ctr_[3];
        std::uint32_t k0 = key0_;
        std::uint32_t k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0;
            std::uint32_t lo0;
            std::uint32_t hi1;
            std::uint32_t lo1;
            mul_hi_lo(0xD2511F53u, c0, hi0, lo0);
            mul_hi_lo(0xCD9E8D57u, c2, hi1, lo1);
            const std::uint32_t n0 = hi1 ^ c1 ^ k0;
            const std::uint32_t n1 = lo1;
            const std::uint32_t n2 = hi0 ^ c3 ^ k1;
            const std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = c0;
        out_[1] = c1;
        out_[2] = c2;
        out_[3] = c3;
        pos_ = 0;
        // 64-bit block counter in the low two words; the stream id sits above.
        if (++ctr_[0] == 0) {
            ++ctr_[1];
        }
    }

    std::uint32_t key0_;
    std::uint32_t key1_;
    std::uint32_t ctr_[4];
    std::uint32_t out_[4];
    int pos_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace chaosdual
