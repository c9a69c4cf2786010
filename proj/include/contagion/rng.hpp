#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace contagion {

// Deterministic random stream. Every stochastic routine takes one of these
// explicitly; parallel work derives disjoint substreams from
// (seed, stage tag, index) so serial and threaded runs agree bit for bit.
//
// All primitive draws are hand-rolled on top of mt19937_64 so that output
// does not depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(mix(mix(seed) + kGolden)) {}

    static Rng substream(std::uint64_t seed, std::string_view stage, std::uint64_t index) {
        std::uint64_t h = mix(seed);
        for (char c : stage) h = mix(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
        h = mix(h ^ mix(index + kGolden));
        return Rng(h);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform on {0, ..., n-1}; rejection keeps the draw exactly uniform.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t rem = (0 - n) % n;  // 2^64 mod n
        std::uint64_t x = gen_();
        while (x < rem) x = gen_();
        return x % n;
    }

    // Knuth's product method; fine for the small means used here.
    int poisson(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        int k = 0;
        do {
            ++k;
            prod *= uniform();
        } while (prod > limit);
        return k - 1;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::uint64_t next_raw() { return gen_(); }

private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += kGolden;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace contagion
