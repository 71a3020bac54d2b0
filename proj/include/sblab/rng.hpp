#pragma once

#include <cmath>
#include <cstdint>

namespace sblab::rng {

// Counter-based engine (Philox4x32-10). Each (seed, stream) pair yields an
// independent sequence that depends only on its own draw counter, so samples
// indexed by stream are reproducible under any execution order.
class Philox {
public:
    Philox(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_lo_(static_cast<std::uint32_t>(stream)),
          stream_hi_(static_cast<std::uint32_t>(stream >> 32)) {}

    using result_type = std::uint32_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return 0xffffffffu; }

    std::uint32_t operator()() { return next_u32(); }

    std::uint32_t next_u32() {
        if (pos_ == 4) {
            block(block_idx_++);
            pos_ = 0;
        }
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t lo = next_u32();
        std::uint64_t hi = next_u32();
        return lo | (hi << 32);
    }

    // Uniform on the open interval (0,1); never returns an endpoint.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double exponential() { return -std::log(uniform()); }

    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    // Marsaglia-Tsang, with the power boost for shape < 1.
    double gamma(double shape) {
        if (shape < 1.0) {
            double g = gamma(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double v = t * t * t;
            double u = uniform();
            double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean > 30.0) {
            // Infinitely divisible split keeps the simple inversion exact.
            return poisson(mean * 0.5) + poisson(mean * 0.5);
        }
        double limit = std::exp(-mean);
        double prod = uniform();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= uniform();
            ++n;
        }
        return n;
    }

private:
    void block(std::uint64_t idx) {
        std::uint32_t c0 = static_cast<std::uint32_t>(idx);
        std::uint32_t c1 = static_cast<std::uint32_t>(idx >> 32);
        std::uint32_t c2 = stream_lo_;
        std::uint32_t c3 = stream_hi_;
        std::uint32_t k0 = key0_;
        std::uint32_t k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint64_t p0 = 0xD2511F53ull * c0;
            std::uint64_t p1 = 0xCD9E8D57ull * c2;
            std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0;
            c1 = n1;
            c2 = n2;
            c3 = n3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        buf_[0] = c0;
        buf_[1] = c1;
        buf_[2] = c2;
        buf_[3] = c3;
    }

    std::uint32_t key0_, key1_;
    std::uint32_t stream_lo_, stream_hi_;
    std::uint64_t block_idx_ = 0;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int pos_ = 4;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

// splitmix64 hash, used to derive substream identifiers.
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace sblab::rng
