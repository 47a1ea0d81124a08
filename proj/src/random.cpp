#include "causalmix/random.hpp"

#include <numeric>
#include <stdexcept>

namespace causalmix {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::size_t n, Rng& rng) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    // Lemire's multiply-shift with rejection keeps the draw exactly uniform.
    const std::uint64_t range = n;
    unsigned __int128 m = static_cast<unsigned __int128>(rng()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(rng()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

bool bernoulli(double p, Rng& rng) { return uniform01(rng) < p; }

std::vector<double> dirichlet(std::size_t k, double alpha, Rng& rng) {
    if (!(alpha > 0.0)) throw std::invalid_argument("dirichlet: concentration must be positive");
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> draw(k);
    double total = 0.0;
    // Rare all-zero draws (tiny alpha) are retried.
    do {
        total = 0.0;
        for (auto& g : draw) {
            g = gamma(rng);
            total += g;
        }
    } while (!(total > 0.0));
    for (auto& g : draw) g /= total;
    return draw;
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw std::invalid_argument("sample_without_replacement: k exceeds n");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_index(n - i, rng);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace causalmix
