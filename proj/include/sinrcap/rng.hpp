#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace sinrcap {

// Finalizer from the splitmix64 generator. Used to decorrelate per-trial
// stream seeds derived from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for the index-th independent stream of a run. Trials seeded this way
// can be generated in any order (or in parallel) with identical results.
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(base ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
}

// mt19937_64 with explicit output mappings. The standard library leaves
// distribution algorithms unspecified, so all mappings from raw 64-bit
// draws to doubles and bounded ints live here to keep runs reproducible
// across compilers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform integer in [0, n) by 128-bit multiply, avoiding modulo bias
    // without a rejection loop.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Uniform k-subset of {0, ..., m-1}, returned sorted.
    std::vector<int> subset(int m, int k) {
        if (k < 0 || k > m) throw std::invalid_argument("Rng::subset: need 0 <= k <= m");
        std::vector<int> pool(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) pool[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < k; ++i) {
            std::size_t j = static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(below(static_cast<std::uint64_t>(m - i)));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        std::vector<int> out(pool.begin(), pool.begin() + k);
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace sinrcap
