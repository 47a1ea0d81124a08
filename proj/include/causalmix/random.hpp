#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace causalmix {

using Rng = std::mt19937_64;

/// Deterministic seed for the `index`-th child stream of `master`.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

inline Rng child_rng(std::uint64_t master, std::uint64_t index) { return Rng(child_seed(master, index)); }

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(std::size_t n, Rng& rng);

bool bernoulli(double p, Rng& rng);

/// Draw from a symmetric Dirichlet over k categories.
std::vector<double> dirichlet(std::size_t k, double alpha, Rng& rng);

/// k distinct values from [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng);

}  // namespace causalmix
