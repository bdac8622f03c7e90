#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace hpdro {

/// Deterministic random stream. std::mt19937_64 output is pinned by the
/// standard, and the uniform/normal transforms below are written out
/// explicitly, so the same seed produces the same doubles on every platform
/// (std::normal_distribution would not). Named sub-streams let one manifest
/// seed drive independent generators (scenarios, error histories, ...).
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    /// Sub-stream derived from a parent seed and a stream name.
    static RandomStream named(std::uint64_t seed, std::string_view stream) {
        return RandomStream(mix(seed ^ fnv1a64(stream)));
    }

    /// Uniform on (0, 1].
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (one value per pair, cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    /// Chi-squared with integer degrees of freedom (sum of squared normals).
    double chi_squared(int dof) {
        double acc = 0.0;
        for (int i = 0; i < dof; ++i) {
            const double z = normal();
            acc += z * z;
        }
        return acc;
    }

    std::uint64_t next_u64() { return engine_(); }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 1469598103934665603ULL;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ULL;
        }
        return h;
    }

private:
    // splitmix64 finalizer; decorrelates nearby seeds.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace hpdro
