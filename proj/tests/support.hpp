#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "nehari/dyadic.hpp"

namespace test_support {

inline nehari::Signal random_signal(const nehari::Grid& g, std::uint64_t seed, bool real = false) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    nehari::Signal f(g);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = real ? nehari::cplx(nd(rng), 0) : nehari::cplx(nd(rng), nd(rng));
    return f;
}

inline nehari::CMatrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    nehari::CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = {nd(rng), nd(rng)};
    return m;
}

// Brute force: direct sum over samples, no library inner product.
inline nehari::cplx quad(const nehari::Signal& f, const nehari::Signal& g) {
    nehari::cplx s = 0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return s / static_cast<double>(f.size());
}

// Adaptedness: max over x and m <= 2 of |I|^{1/2+m} |f^(m)(x)| (1 + dist(x, I)/|I|)^N on the
// circle, derivatives by central differences.
inline double adaptedness_constant(const nehari::Signal& f, const nehari::DyadicInterval& I, int N) {
    const auto n = f.size();
    const double h = 1.0 / static_cast<double>(n);
    double best = 0;
    for (int m = 0; m <= 2; ++m)
        for (std::size_t x = 0; x < n; ++x) {
            const auto& l = f[(x + n - 1) % n];
            const auto& r = f[(x + 1) % n];
            const nehari::cplx d = m == 0 ? f[x] : m == 1 ? (r - l) / (2 * h) : (r - 2.0 * f[x] + l) / (h * h);
            const double c = std::abs((static_cast<double>(x) + 0.5) * h - I.center());
            const double dist = std::max(0.0, std::min(c, 1 - c) - I.length() / 2);
            best = std::max(best, std::pow(I.length(), 0.5 + m) * std::abs(d) * std::pow(1 + dist / I.length(), N));
        }
    return best;
}

}  // namespace test_support
