// Semi-device-independent fidelity bound F-hat (Appendix-B style): for each
// setting, the best Bhattacharyya overlap with a product distribution equals
// the best rank-one value of the sqrt-probability tensor; F-hat is the
// minimum over settings.
//
// Order 2 uses an exact singular-value computation. Order >= 3 uses the
// shifted higher-order power method on the symmetric embedding of the
// tensor; the embedding's block structure is realized implicitly by
// iterating on the stacked factor vector (u_1, ..., u_n).
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "entcert/rng.hpp"
#include "entcert/types.hpp"

namespace entcert {

// Nonnegative order-n tensor with T(a) = sqrt(p(a|x)) for one fixed setting.
struct SettingTensor {
    std::vector<int> dims;
    std::vector<double> entries;  // first index slowest

    double at(const std::vector<int>& idx) const {
        return entries[static_cast<std::size_t>(flat_index(idx, strides_for(dims)))];
    }

    int order() const { return static_cast<int>(dims.size()); }

    static SettingTensor from_correlation(const Correlation& c, const std::vector<int>& xs) {
        SettingTensor t;
        t.dims = c.outcomes_per_party;
        t.entries.resize(static_cast<std::size_t>(c.outcome_count()));
        std::vector<int> as(static_cast<std::size_t>(c.parties()), 0);
        const auto strides = strides_for(t.dims);
        do {
            const double p = c.p(xs, as);
            if (p < -1e-12) throw error("SettingTensor: negative probability");
            t.entries[static_cast<std::size_t>(flat_index(as, strides))] =
                std::sqrt(std::max(0.0, p));
        } while (next_index(as, t.dims));
        return t;
    }
};

// Largest singular value of the matrix sqrt(p(ab|xy)); exact for order 2.
inline double setting_bound_bipartite(const SettingTensor& t) {
    if (t.order() != 2) throw error("setting_bound_bipartite: tensor order must be 2");
    Mat m(t.dims[0], t.dims[1]);
    for (int i = 0; i < t.dims[0]; ++i)
        for (int j = 0; j < t.dims[1]; ++j) m(i, j) = t.entries[static_cast<std::size_t>(i * t.dims[1] + j)];
    return max_singular_value(m);
}

struct ShopmOptions {
    int restarts = 20;        // 1 uniform-positive start + the rest random
    int max_iters = 5000;
    double tol = 1e-10;       // convergence threshold on the objective change
    std::uint64_t seed = 2024;
};

struct SettingBound {
    double value = 0.0;
    bool converged = true;    // false if every restart hit max_iters
    int iterations = 0;       // total across restarts
    int restarts = 0;
};

namespace detail {

// T contracted on every mode except `mode` with the respective factors.
inline std::vector<double> contract_all_but(const std::vector<double>& T,
                                            const std::vector<int>& dims,
                                            const std::vector<std::vector<double>>& us,
                                            int mode) {
    const int n = static_cast<int>(dims.size());
    std::vector<double> out(static_cast<std::size_t>(dims[static_cast<std::size_t>(mode)]), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const auto strides = strides_for(dims);
    do {
        double w = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != mode)
                w *= us[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        out[static_cast<std::size_t>(idx[static_cast<std::size_t>(mode)])] +=
            w * T[static_cast<std::size_t>(flat_index(idx, strides))];
    } while (next_index(idx, dims));
    return out;
}

inline double multilinear_value(const std::vector<double>& T, const std::vector<int>& dims,
                                const std::vector<std::vector<double>>& us) {
    double v = 0.0;
    std::vector<int> idx(dims.size(), 0);
    const auto strides = strides_for(dims);
    do {
        double w = T[static_cast<std::size_t>(flat_index(idx, strides))];
        for (std::size_t k = 0; k < dims.size(); ++k)
            w *= us[k][static_cast<std::size_t>(idx[k])];
        v += w;
    } while (next_index(idx, dims));
    return v;
}

}  // namespace detail

// Best rank-one value  max_{unit u_i} sum_a T(a) prod_i u_i(a_i)  via the
// shifted power method on the symmetric embedding. The stacked vector
// x = (u_1,...,u_n) is kept unit-norm; the embedded objective S x^n equals
// the multilinear value at the block-normalized factors scaled by n^{-n/2}.
inline SettingBound setting_bound_shopm(const SettingTensor& t, const ShopmOptions& opts = {}) {
    const int n = t.order();
    if (n < 3) throw error("setting_bound_shopm: tensor order must be >= 3");
    for (double e : t.entries)
        if (e < 0.0) throw error("setting_bound_shopm: entries must be nonnegative");

    const double shift = 1.0 + std::accumulate(t.entries.begin(), t.entries.end(), 0.0,
                                               [](double a, double b) { return a + std::abs(b); });
    const double recover = std::pow(static_cast<double>(n), n / 2.0);

    SettingBound res;
    res.restarts = opts.restarts;
    double best = 0.0;
    bool any_converged = false;

    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(r)));
        std::vector<std::vector<double>> us(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            auto& u = us[static_cast<std::size_t>(i)];
            u.resize(static_cast<std::size_t>(t.dims[static_cast<std::size_t>(i)]));
            double norm2 = 0.0;
            for (auto& v : u) {
                v = (r == 0) ? 1.0 : std::abs(rng.normal());
                norm2 += v * v;
            }
            const double s = 1.0 / (std::sqrt(norm2) * std::sqrt(static_cast<double>(n)));
            for (auto& v : u) v *= s;  // block norm 1/sqrt(n): stacked x is unit
        }

        double f = detail::multilinear_value(t.entries, t.dims, us);
        bool converged = false;
        for (int it = 0; it < opts.max_iters; ++it) {
            ++res.iterations;
            // stacked gradient block i is (1/n) T x_{-i}; the shift term adds
            // alpha * x. The common factor 1/n cancels under normalization.
            std::vector<std::vector<double>> grad(static_cast<std::size_t>(n));
            double norm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                grad[static_cast<std::size_t>(i)] =
                    detail::contract_all_but(t.entries, t.dims, us, i);
                auto& g = grad[static_cast<std::size_t>(i)];
                for (std::size_t k = 0; k < g.size(); ++k) {
                    g[k] = g[k] / static_cast<double>(n) +
                           shift * us[static_cast<std::size_t>(i)][k];
                    norm2 += g[k] * g[k];
                }
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& g : grad)
                for (auto& v : g) v *= inv;
            const double f2 = detail::multilinear_value(t.entries, t.dims, grad);
            if (f2 < f - 1e-12)
                throw error("setting_bound_shopm: shifted iteration lost monotonicity");
            us = std::move(grad);
            if (std::abs(f2 - f) < opts.tol) {
                f = f2;
                converged = true;
                break;
            }
            f = f2;
        }
        any_converged = any_converged || converged;
        best = std::max(best, f * recover);
    }

    res.converged = any_converged;
    res.value = std::min(best, 1.0);
    return res;
}

struct FhatDiagnostics {
    int restarts = 0;
    int iterations = 0;
    bool all_converged = true;
};

struct FidelityBound {
    double value = 1.0;
    std::vector<double> per_setting;          // one bound per input combination
    std::vector<int> argmin_setting;
    FhatDiagnostics diagnostics;
};

// Minimum over all input combinations of the per-setting rank-one bound.
// Every setting present in the table participates, including settings a Bell
// functional does not use; more settings can only tighten the bound.
inline FidelityBound fhat(const Correlation& c, const ShopmOptions& opts = {}) {
    FidelityBound out;
    out.value = 1.0;
    std::vector<int> xs(static_cast<std::size_t>(c.parties()), 0);
    int setting_index = 0;
    do {
        const auto t = SettingTensor::from_correlation(c, xs);
        double v;
        if (t.order() == 2) {
            v = setting_bound_bipartite(t);
        } else {
            ShopmOptions o = opts;
            o.seed = derive_seed(opts.seed, static_cast<std::uint64_t>(setting_index));
            const auto b = setting_bound_shopm(t, o);
            v = b.value;
            out.diagnostics.iterations += b.iterations;
            out.diagnostics.restarts += b.restarts;
            out.diagnostics.all_converged = out.diagnostics.all_converged && b.converged;
        }
        out.per_setting.push_back(v);
        if (v < out.value) {
            out.value = v;
            out.argmin_setting = xs;
        }
        ++setting_index;
    } while (next_index(xs, c.inputs_per_party));
    return out;
}

}  // namespace entcert
