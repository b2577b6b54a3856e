#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace entgauss {

// 53-bit uniform in [0,1). mt19937_64 has a standardized stream, so results
// are reproducible across platforms; std::uniform_real_distribution is not.
inline double uniform53(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Standard normal draws via the Marsaglia polar method.
class NormalSampler {
public:
    double operator()(std::mt19937_64& gen) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform53(gen) - 1.0;
            v = 2.0 * uniform53(gen) - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// SplitMix64 mix; derives independent per-task seeds from a master seed so
// parallel work gives the same aggregate regardless of scheduling.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace entgauss
