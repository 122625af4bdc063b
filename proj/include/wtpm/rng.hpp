#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "wtpm/errors.hpp"

namespace wtpm {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives the seed of an independent substream. Nests: a substream of a
// substream is again well distributed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(~stream));
}

// Seeded random source. mt19937_64 itself is specified exactly by the
// standard, but the standard distributions are not, so the samplers here are
// hand-rolled to keep streams bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(substream_seed(seed, stream));
    }

    std::uint64_t raw() { return engine_(); }

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1]; safe as a log() argument
    double uniform_pos() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform_pos()); }

    // standard normal, Box-Muller with cached partner draw
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // Gamma(shape, rate), Marsaglia-Tsang squeeze with the shape<1 boost
    double gamma(double shape, double rate) {
        if (!(shape > 0.0) || !(rate > 0.0)) throw InvalidInput("gamma: shape and rate must be positive");
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform_pos();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
        }
    }

    // Poisson(mean). Product-of-uniforms in chunks so exp(-mean) never
    // underflows; cost is linear in mean, which is fine at desk scale.
    long long poisson(double mean) {
        if (!(mean >= 0.0)) throw InvalidInput("poisson: mean must be non-negative");
        long long total = 0;
        const double chunk = 32.0;
        while (mean > chunk) {
            total += poisson_small(chunk);
            mean -= chunk;
        }
        return total + poisson_small(mean);
    }

    // index k with probability probs[k]; probs must sum to ~1
    int categorical(const double* probs, int k) {
        const double u = uniform();
        double acc = 0.0;
        for (int i = 0; i < k; ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return k - 1;
    }

private:
    long long poisson_small(double mean) {
        const double limit = std::exp(-mean);
        long long k = -1;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace wtpm
