// Bell functionals: definition, evaluation, classical bounds by exhaustive
// strategy enumeration, Bell operators and their spectra, and the built-in
// CGLMP-3 and MABK-3 functionals.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "entcert/correlation.hpp"
#include "entcert/types.hpp"

namespace entcert {

struct QuantumBound {
    double value = 0.0;
    DimVector dims;            // the dimension vector the bound was certified for
    std::string provenance;
};

struct BellFunctional {
    std::string name;
    std::vector<int> inputs_per_party;
    std::vector<int> outcomes_per_party;
    std::vector<double> coeffs;     // same (x, a) layout as Correlation tables
    double classical_bound = 0.0;   // C_l
    QuantumBound quantum_bound;     // C_q tagged with its dimension vector
    std::string normalization_note;

    int parties() const { return static_cast<int>(inputs_per_party.size()); }

    int setting_count() const {
        int n = 1;
        for (int v : inputs_per_party) n *= v;
        return n;
    }
    int outcome_count() const {
        int n = 1;
        for (int v : outcomes_per_party) n *= v;
        return n;
    }

    void allocate() {
        coeffs.assign(static_cast<std::size_t>(setting_count()) *
                          static_cast<std::size_t>(outcome_count()),
                      0.0);
    }

    double& c(const std::vector<int>& xs, const std::vector<int>& as) {
        return coeffs[static_cast<std::size_t>(offset(xs, as))];
    }
    double c(const std::vector<int>& xs, const std::vector<int>& as) const {
        return coeffs[static_cast<std::size_t>(offset(xs, as))];
    }

    int offset(const std::vector<int>& xs, const std::vector<int>& as) const {
        return flat_index(xs, strides_for(inputs_per_party)) * outcome_count() +
               flat_index(as, strides_for(outcomes_per_party));
    }

    void validate() const {
        if (inputs_per_party.size() < 2)
            throw error("BellFunctional: need at least 2 parties");
        if (outcomes_per_party.size() != inputs_per_party.size())
            throw error("BellFunctional: arity vector length mismatch");
        if (coeffs.size() != static_cast<std::size_t>(setting_count()) *
                                 static_cast<std::size_t>(outcome_count()))
            throw error("BellFunctional: coefficient table does not cover declared arity");
        if (classical_bound > quantum_bound.value + 1e-9)
            throw error("BellFunctional: classical bound exceeds quantum bound");
    }
};

// I = sum_{x,a} c_x^a p(a|x); arities must agree exactly.
inline double evaluate(const BellFunctional& f, const Correlation& corr) {
    if (f.inputs_per_party != corr.inputs_per_party ||
        f.outcomes_per_party != corr.outcomes_per_party)
        throw error("evaluate: functional and correlation arities disagree");
    double total = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) total += f.coeffs[i] * corr.table[i];
    return total;
}

// Exact maximum over all local deterministic strategies.
inline double classical_bound_bruteforce(const BellFunctional& f,
                                         long long guard = 10'000'000) {
    const int n = f.parties();
    // one outcome choice per (party, input)
    std::vector<int> extents;
    long long count = 1;
    for (int i = 0; i < n; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        for (int x = 0; x < f.inputs_per_party[iu]; ++x) {
            extents.push_back(f.outcomes_per_party[iu]);
            count *= f.outcomes_per_party[iu];
            if (count > guard)
                throw error("classical_bound_bruteforce: strategy count exceeds guard");
        }
    }
    // strategy[party][input] lives flattened in `assign`
    std::vector<int> offsets(static_cast<std::size_t>(n), 0);
    for (int i = 1; i < n; ++i)
        offsets[static_cast<std::size_t>(i)] =
            offsets[static_cast<std::size_t>(i) - 1] + f.inputs_per_party[static_cast<std::size_t>(i) - 1];

    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> assign(extents.size(), 0);
    std::vector<int> xs(static_cast<std::size_t>(n), 0), as(static_cast<std::size_t>(n), 0);
    do {
        double v = 0.0;
        std::fill(xs.begin(), xs.end(), 0);
        do {
            for (int i = 0; i < n; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                as[iu] = assign[static_cast<std::size_t>(offsets[iu] + xs[iu])];
            }
            v += f.c(xs, as);
        } while (next_index(xs, f.inputs_per_party));
        best = std::max(best, v);
    } while (next_index(assign, extents));
    return best;
}

// B = sum c_x^a  M_{x_1}^{a_1} (x) ... (x) M_{x_n}^{a_n}.
inline Mat bell_operator(const BellFunctional& f, const MeasurementSet& m) {
    if (f.inputs_per_party != m.inputs_per_party() ||
        f.outcomes_per_party != m.outcomes_per_party())
        throw error("bell_operator: functional and measurement arities disagree");
    const int D = m.dim.total();
    const int n = f.parties();
    Mat B = Mat::Zero(D, D);
    std::vector<int> xs(static_cast<std::size_t>(n), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(n), 0);
        do {
            const double v = f.c(xs, as);
            if (v != 0.0) {
                std::vector<Mat> factors;
                factors.reserve(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    const auto iu = static_cast<std::size_t>(i);
                    factors.push_back(m.ops[iu][static_cast<std::size_t>(xs[iu])]
                                              [static_cast<std::size_t>(as[iu])]);
                }
                B += v * kron_all(factors);
            }
        } while (next_index(as, f.outcomes_per_party));
    } while (next_index(xs, f.inputs_per_party));
    return B;
}

struct SpectralGap {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

inline SpectralGap spectral_gap(const BellFunctional& f, const MeasurementSet& m) {
    const auto eig = eig_hermitian(bell_operator(f, m));
    return SpectralGap{eig.values[0], eig.values[1]};
}

// ---------------------------------------------------------------------------
// Built-in functionals
// ---------------------------------------------------------------------------

namespace detail {
// Probability-term P(A_x = B_y + k) = sum_j p(j, j+k mod 3 | x, y): adds val
// to every coefficient on that shift class.
inline void add_shift_term(BellFunctional& f, int x, int y, int k, double val) {
    for (int j = 0; j < 3; ++j) {
        const int b = ((j + k) % 3 + 3) % 3;
        std::vector<int> xs{x, y}, as{j, b};
        f.c(xs, as) += val;
    }
}
}  // namespace detail

// CGLMP-3 in the standard probability form
//   I3 = [P(A1=B1) + P(B1=A2+1) + P(A2=B2) + P(B2=A1)]
//      - [P(A1=B1-1) + P(B1=A2) + P(A2=B2-1) + P(B2=A1-1)],
// with P(A_x = B_y + k) = sum_j p(j+k mod 3, j | x, y). C_l = 2 (exact, 81
// deterministic strategies); C_q(3,3) = 1 + sqrt(11/3), certified by the
// see-saw oracle.
inline BellFunctional cglmp3() {
    BellFunctional f;
    f.name = "cglmp3";
    f.inputs_per_party = {2, 2};
    f.outcomes_per_party = {3, 3};
    f.allocate();
    using detail::add_shift_term;
    add_shift_term(f, 0, 0, 0, +1);   // P(A1 = B1)
    add_shift_term(f, 1, 0, -1, +1);  // P(B1 = A2 + 1)
    add_shift_term(f, 1, 1, 0, +1);   // P(A2 = B2)
    add_shift_term(f, 0, 1, 0, +1);   // P(B2 = A1)
    add_shift_term(f, 0, 0, -1, -1);  // P(A1 = B1 - 1)
    add_shift_term(f, 1, 0, 0, -1);   // P(B1 = A2)
    add_shift_term(f, 1, 1, -1, -1);  // P(A2 = B2 - 1)
    add_shift_term(f, 0, 1, 1, -1);   // P(B2 = A1 - 1)
    f.classical_bound = 2.0;
    f.quantum_bound = {1.0 + std::sqrt(11.0 / 3.0), DimVector{3, 3},
                       "see-saw oracle, 50 restarts; equals 1+sqrt(11/3)"};
    f.normalization_note = "standard probability form; C_l = 2";
    return f;
}

// MABK-3, normalized so that C_l = 1 and C_q(2,2,2) = 2:
//   I = (E(XXY) + E(XYX) + E(YXX) - E(YYY)) / 2,
// with E the +-1-outcome correlator (outcome 1 -> +1, outcome 0 -> -1) and
// input 0 = X, input 1 = Y.
inline BellFunctional mabk3() {
    BellFunctional f;
    f.name = "mabk3";
    f.inputs_per_party = {2, 2, 2};
    f.outcomes_per_party = {2, 2, 2};
    f.allocate();
    struct Term { int x1, x2, x3; double w; };
    const Term terms[] = {{0, 0, 1, 0.5}, {0, 1, 0, 0.5}, {1, 0, 0, 0.5}, {1, 1, 1, -0.5}};
    for (const auto& t : terms) {
        std::vector<int> xs{t.x1, t.x2, t.x3};
        std::vector<int> as(3, 0);
        do {
            int sign = 1;
            for (int ai : as) sign *= (ai == 1 ? 1 : -1);
            f.c(xs, as) += t.w * sign;
        } while (next_index(as, f.outcomes_per_party));
    }
    f.classical_bound = 1.0;
    f.quantum_bound = {2.0, DimVector{2, 2, 2},
                       "Bell-operator spectrum at X/Y settings; see-saw oracle agrees"};
    f.normalization_note = "raw 4-correlator combination divided by 2";
    return f;
}

}  // namespace entcert
