// See-saw maximization of a Bell functional over states and projective
// measurements. The state step takes the Bell operator's top eigenvector;
// each measurement step runs exact pairwise-rotation coordinate ascent on
// the party's orthonormal outcome basis. Both steps are monotone.
#pragma once

#include <vector>

#include "entcert/bell.hpp"
#include "entcert/rng.hpp"

namespace entcert {

struct SeesawOptions {
    int restarts = 50;
    int max_iters = 300;
    double tol = 1e-12;
    std::uint64_t seed = 1;
};

struct SeesawResult {
    double value = 0.0;
    PureState state;
    MeasurementSet settings;
    bool converged = false;
};

namespace detail {

inline Mat random_unitary(int d, Rng& rng) {
    Mat z(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z(i, j) = cxd(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Mat> qr(z);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; ++j) {
        cxd ph = r(j, j) / std::abs(r(j, j));
        q.col(j) *= ph;
    }
    return q;
}

// Maximizes sum_a <v_a| G_a |v_a> over orthonormal bases {v_a} by sweeping
// 2x2 rotations: within span(v_a, v_b) the optimal re-mixing is the top
// eigenvector of the restricted G_a - G_b.
inline void pairwise_rotations(std::vector<Vec>& vecs, const std::vector<Mat>& G,
                               int sweeps = 40) {
    const std::size_t no = vecs.size();
    for (int s = 0; s < sweeps; ++s) {
        double gain_total = 0.0;
        for (std::size_t a = 0; a < no; ++a) {
            for (std::size_t b = a + 1; b < no; ++b) {
                const Vec& va = vecs[a];
                const Vec& vb = vecs[b];
                Eigen::Matrix2cd M;
                M(0, 0) = (va.adjoint() * (G[a] - G[b]) * va)(0);
                M(0, 1) = (va.adjoint() * (G[a] - G[b]) * vb)(0);
                M(1, 0) = std::conj(M(0, 1));
                M(1, 1) = (vb.adjoint() * (G[a] - G[b]) * vb)(0);
                Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(M);
                const auto u1 = es.eigenvectors().col(1);  // top
                Vec na = u1(0) * va + u1(1) * vb;
                Vec nb = -std::conj(u1(1)) * va + std::conj(u1(0)) * vb;
                const double before = (va.adjoint() * G[a] * va)(0).real() +
                                      (vb.adjoint() * G[b] * vb)(0).real();
                const double after = (na.adjoint() * G[a] * na)(0).real() +
                                     (nb.adjoint() * G[b] * nb)(0).real();
                if (after > before + 1e-14) {
                    vecs[a] = na;
                    vecs[b] = nb;
                    gain_total += after - before;
                }
            }
        }
        if (gain_total < 1e-13) break;
    }
}

// Gradient operators for party i's measurement update: with everything else
// fixed, the objective restricted to input x of party i is
// sum_a Tr(M_x^a G_a) with G_a = Tr_rest[(I_i (x) other_a) rho].
inline std::vector<Mat> party_gradients(const BellFunctional& f, const MeasurementSet& m,
                                        const Mat& rho, int party, int input) {
    const int n = f.parties();
    const auto pu = static_cast<std::size_t>(party);
    const int d = m.dim.dims[pu];
    const int no = f.outcomes_per_party[pu];
    std::vector<Mat> G(static_cast<std::size_t>(no), Mat::Zero(d, d));

    const auto strides = strides_for(m.dim.dims);
    const int D = m.dim.total();
    const int stride = strides[pu];

    std::vector<int> xs(static_cast<std::size_t>(n), 0);
    do {
        if (xs[pu] != input) continue;
        std::vector<int> as(static_cast<std::size_t>(n), 0);
        do {
            const double w = f.c(xs, as);
            if (w == 0.0) continue;
            std::vector<Mat> factors;
            factors.reserve(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (j == party)
                    factors.push_back(Mat::Identity(d, d));
                else
                    factors.push_back(m.ops[ju][static_cast<std::size_t>(xs[ju])]
                                              [static_cast<std::size_t>(as[ju])]);
            }
            const Mat prod = kron_all(factors) * rho;
            // partial trace over the other parties:
            // contracted(p,q) = sum over joint indices with party slot p of
            // prod(idx, idx shifted to slot q)
            Mat contracted = Mat::Zero(d, d);
            for (int idx = 0; idx < D; ++idx) {
                const int slot = (idx / stride) % d;
                for (int q = 0; q < d; ++q)
                    contracted(slot, q) += prod(idx, idx + (q - slot) * stride);
            }
            G[static_cast<std::size_t>(as[pu])] += w * contracted;
        } while (next_index(as, f.outcomes_per_party));
    } while (next_index(xs, f.inputs_per_party));
    // numerical hermitization; the exact gradients are Hermitian
    for (auto& g : G) g = (g + g.adjoint()) / 2.0;
    return G;
}

}  // namespace detail

// Maximize over the state and all measurements (rho_fixed empty) or over
// measurements only for a fixed state.
inline SeesawResult seesaw_max(const BellFunctional& f, const DimVector& dim,
                               const SeesawOptions& opts = {},
                               const PureState* fixed_state = nullptr,
                               const MeasurementSet* init = nullptr) {
    const int n = f.parties();
    if (dim.parties() != n) throw error("seesaw_max: dimension/party mismatch");
    SeesawResult best;
    best.value = -std::numeric_limits<double>::infinity();

    for (int restart = 0; restart < opts.restarts; ++restart) {
        Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(restart)));
        // basis vectors per party/input
        std::vector<std::vector<std::vector<Vec>>> bases(static_cast<std::size_t>(n));
        MeasurementSet m;
        m.dim = dim;
        m.ops.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            const int d = dim.dims[iu];
            const int no = f.outcomes_per_party[iu];
            if (no != d)
                throw error("seesaw_max: supports projective rank-1 measurements (outcomes == dimension)");
            bases[iu].resize(static_cast<std::size_t>(f.inputs_per_party[iu]));
            m.ops[iu].resize(static_cast<std::size_t>(f.inputs_per_party[iu]));
            for (int x = 0; x < f.inputs_per_party[iu]; ++x) {
                const auto xu = static_cast<std::size_t>(x);
                Mat U;
                if (init && restart == 0) {
                    // first restart reuses the supplied settings
                    U = Mat::Zero(d, d);
                    for (int k = 0; k < d; ++k) {
                        const auto eig = eig_hermitian(init->ops[iu][xu][static_cast<std::size_t>(k)]);
                        U.col(k) = eig.vectors.col(0);
                    }
                } else {
                    U = detail::random_unitary(d, rng);
                }
                bases[iu][xu].resize(static_cast<std::size_t>(d));
                m.ops[iu][xu].resize(static_cast<std::size_t>(d));
                for (int k = 0; k < d; ++k) {
                    bases[iu][xu][static_cast<std::size_t>(k)] = U.col(k);
                    m.ops[iu][xu][static_cast<std::size_t>(k)] =
                        U.col(k) * U.col(k).adjoint();
                }
            }
        }

        double value = -std::numeric_limits<double>::infinity();
        Vec psi;
        bool converged = false;
        for (int it = 0; it < opts.max_iters; ++it) {
            const Mat B = bell_operator(f, m);
            double newval;
            if (fixed_state) {
                psi = fixed_state->amplitudes;
                newval = (psi.adjoint() * B * psi)(0).real();
            } else {
                const auto eig = eig_hermitian(B);
                psi = eig.vectors.col(0);
                newval = eig.values[0];
            }
            const Mat rho = psi * psi.adjoint();
            for (int i = 0; i < n; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                for (int x = 0; x < f.inputs_per_party[iu]; ++x) {
                    const auto xu = static_cast<std::size_t>(x);
                    const auto G = detail::party_gradients(f, m, rho, i, x);
                    detail::pairwise_rotations(bases[iu][xu], G);
                    for (int k = 0; k < dim.dims[iu]; ++k)
                        m.ops[iu][xu][static_cast<std::size_t>(k)] =
                            bases[iu][xu][static_cast<std::size_t>(k)] *
                            bases[iu][xu][static_cast<std::size_t>(k)].adjoint();
                }
            }
            if (it > 3 && std::abs(newval - value) < opts.tol) {
                value = newval;
                converged = true;
                break;
            }
            value = newval;
        }
        if (value > best.value) {
            best.value = value;
            best.state = PureState(dim, psi.normalized());
            best.settings = m;
            best.converged = converged;
        }
    }
    return best;
}

}  // namespace entcert
