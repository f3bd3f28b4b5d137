#pragma once

// Random generators for property tests. Seeds are fixed per test.

#include <random>
#include <vector>

#include "nhdmp/nhdmp.hpp"

namespace nhdmp::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Normalized random weights over `allowed`; a fraction of them zeroed when sparse.
inline std::vector<double> random_distribution(Rng& rng, std::size_t n, const std::vector<std::size_t>& allowed,
                                               bool sparse = false) {
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (auto j : allowed) {
        double v = uniform(rng, 0.05, 1.0);
        if (sparse && uniform(rng) < 0.3) v = 0.0;
        w[j] = v;
        total += v;
    }
    if (total == 0.0) {
        w[allowed.front()] = 1.0;
        total = 1.0;
    }
    for (auto& v : w) v /= total;
    return w;
}

// Reference measure; with `holes`, some states get zero mass (at least one keeps mass).
inline ReferenceSpace random_reference(Rng& rng, std::size_t n, bool holes = false) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (holes && i > 0 && uniform(rng) < 0.35) ? 0.0 : uniform(rng, 0.1, 1.0);
    double total = 0.0;
    for (double v : w) total += v;
    for (auto& v : w) v /= total;
    return ReferenceSpace(std::move(w));
}

// Row-stochastic and mu-measurable: supported rows stay on supp(mu).
inline KernelMatrix random_kernel(Rng& rng, const ReferenceSpace& ref, bool sparse = false) {
    const std::size_t n = ref.n_states();
    const auto supp = ref.support_states();
    const auto all = [&] {
        std::vector<std::size_t> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = i;
        return v;
    }();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i)
        rows.push_back(random_distribution(rng, n, ref.support().contains(i) ? supp : all, sparse));
    return KernelMatrix::from_rows(rows);
}

inline Process random_process(Rng& rng, std::size_t n, std::size_t steps, bool holes = false, bool sparse = false) {
    auto ref = random_reference(rng, n, holes);
    std::vector<KernelMatrix> mats;
    for (std::size_t s = 0; s < steps; ++s) mats.push_back(random_kernel(rng, ref, sparse));
    return Process::from_steps(std::move(ref), std::move(mats));
}

inline Measure random_in_m(Rng& rng, const ReferenceSpace& ref) {
    return Measure(random_distribution(rng, ref.n_states(), ref.support_states()));
}

inline QspTensor random_qsp_tensor(Rng& rng, const ReferenceSpace& ref) {
    const std::size_t n = ref.n_states();
    QspTensor t(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x; y < n; ++y) {
            const auto fiber = random_distribution(rng, n, ref.support_states());
            for (std::size_t j = 0; j < n; ++j) {
                t(x, y, j) = fiber[j];
                t(y, x, j) = fiber[j];
            }
        }
    return t;
}

inline QspProcess random_qsp(Rng& rng, std::size_t n, std::size_t steps, bool holes = false) {
    auto ref = random_reference(rng, n, holes);
    std::vector<QspTensor> tensors;
    for (std::size_t s = 0; s < steps; ++s) tensors.push_back(random_qsp_tensor(rng, ref));
    auto initial = random_in_m(rng, ref);
    return QspProcess(std::move(ref), std::move(tensors), std::move(initial));
}

// Reference dense product, written independently of KernelMatrix.
inline std::vector<std::vector<double>> naive_product(const std::vector<std::vector<double>>& a,
                                                      const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t l = 0; l < n; ++l) c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline double max_abs_diff(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
    return d;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace nhdmp::testing
