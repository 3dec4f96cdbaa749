// Purity certificates: lower bounds a_1 on the largest eigenvalue of the
// unknown state, either from non-degeneracy profile rows (semi-DI mode) or
// from the Bell-operator spectral gap at known measurements (device-dependent
// mode). profile_search estimates profile rows numerically.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entcert/bell.hpp"
#include "entcert/rng.hpp"

namespace entcert {

struct ProfileRow {
    double eps1 = 0.0;        // threshold: the row applies when observed eps1 <= this
    double eps2 = 0.0;
    std::string provenance;
    bool flagged = false;     // optimizer budget exhausted while estimating
};

struct NondegeneracyProfile {
    std::string functional;
    DimVector dims;
    double c_q = 0.0;
    std::vector<ProfileRow> rows;  // sorted by eps1 ascending

    void validate() const {
        double prev = -1.0;
        for (const auto& r : rows) {
            if (r.eps1 < prev) throw error("NondegeneracyProfile: rows not sorted by eps1");
            prev = r.eps1;
            // eps1 == eps2 occurs for spectral-gap-derived rows, so the
            // comparison is non-strict
            if (!(r.eps1 >= 0.0 && r.eps1 <= r.eps2 && r.eps2 <= c_q + 1e-9))
                throw error("NondegeneracyProfile: row violates 0 <= eps1 <= eps2 <= C_q");
        }
    }
};

enum class PurityMode { profile, spectral };

struct PurityCertificate {
    double a1 = 0.0;
    PurityMode mode = PurityMode::spectral;
    double observed = 0.0;                 // observed Bell value
    std::variant<ProfileRow, SpectralGap> evidence;
    bool vacuous = false;                  // a1 carries no information
};

inline constexpr double kBellSlack = 1e-9;

// a1 >= 1 - eps1_obs / eps2 using the best applicable row. Returns nothing
// when no row applies or every applicable row gives a nonpositive bound.
// A certified bound below the trivial 1/D is floored to 1/D and marked
// vacuous (the largest eigenvalue of a unit-trace state is at least 1/D).
inline std::optional<PurityCertificate> a1_from_profile(double I_obs,
                                                        const NondegeneracyProfile& prof) {
    if (I_obs > prof.c_q + kBellSlack)
        throw error("a1_from_profile: observed Bell value exceeds quantum bound; inconsistent data");
    const double eps1_obs = std::max(0.0, prof.c_q - I_obs);
    std::optional<PurityCertificate> best;
    for (const auto& row : prof.rows) {
        if (eps1_obs > row.eps1 + 1e-12) continue;   // row threshold exceeded
        if (row.eps2 <= 0.0) continue;
        const double a1 = 1.0 - eps1_obs / row.eps2;
        if (a1 <= 0.0) continue;
        if (!best || a1 > best->a1) {
            PurityCertificate c;
            c.a1 = std::min(1.0, a1);
            c.mode = PurityMode::profile;
            c.observed = I_obs;
            c.evidence = row;
            best = c;
        }
    }
    if (best) {
        const double floor = 1.0 / prof.dims.total();
        if (best->a1 <= floor) {
            best->a1 = floor;
            best->vacuous = true;
        }
    }
    return best;
}

// Device-dependent: I = sum_i a_i <psi_i|B|psi_i> <= a1 l1 + (1-a1) l2 for
// any orthogonal decomposition, so a1 >= (I - l2)/(l1 - l2).
inline PurityCertificate a1_from_spectrum(double I_obs, const SpectralGap& gap) {
    if (gap.lambda1 <= gap.lambda2)
        throw error("a1_from_spectrum: degenerate gap (lambda1 <= lambda2)");
    if (I_obs > gap.lambda1 + kBellSlack)
        throw error("a1_from_spectrum: observed Bell value exceeds lambda1; inconsistent data");
    PurityCertificate c;
    c.mode = PurityMode::spectral;
    c.observed = I_obs;
    c.evidence = gap;
    c.a1 = std::clamp((I_obs - gap.lambda2) / (gap.lambda1 - gap.lambda2), 0.0, 1.0);
    c.vacuous = (c.a1 <= 0.0);
    return c;
}

// ---------------------------------------------------------------------------
// profile_search: numerical estimation of (eps1, eps2) rows
// ---------------------------------------------------------------------------
//
// For fixed measurements M with Bell operator spectrum l1 >= l2 >= ..., the
// largest value reachable by a state orthogonal to any state achieving at
// least t = C_q - eps1 is min(l1, l1 + l2 - t). A valid row therefore needs
//   eps2 <= 2 C_q - eps1 - max_M { l1(M) + l2(M) : l1(M) >= C_q - eps1 }.
// The maximization runs over projective measurements parameterized by one
// unitary per party-input (d = 2: two angles, d >= 3: d^2 - 1 generator
// coefficients), with adaptive random-direction ascent and many restarts.

struct ProfileSearchOptions {
    int restarts = 200;
    int iters_per_restart = 400;
    double safety = 0.99;        // shrink factor applied to eps2 estimates
    double penalty = 1e3;        // constraint penalty weight
    std::uint64_t seed = 7;
};

namespace detail {

inline int unitary_param_count(int d) { return d == 2 ? 2 : d * d - 1; }

// d = 2: |v> = (cos t/2, e^{i phi} sin t/2); d >= 3: U = exp(iH) with H in a
// traceless Hermitian generator basis.
inline Mat unitary_from_params(const std::vector<double>& p, int d) {
    if (d == 2) {
        const double t = p[0], phi = p[1];
        Mat u(2, 2);
        u(0, 0) = std::cos(t / 2);
        u(1, 0) = std::exp(cxd(0, phi)) * std::sin(t / 2);
        u(0, 1) = -std::exp(cxd(0, -phi)) * std::sin(t / 2);
        u(1, 1) = std::cos(t / 2);
        return u;
    }
    Mat H = Mat::Zero(d, d);
    std::size_t k = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            H(i, j) += cxd(p[k], -p[k + 1]);
            H(j, i) += cxd(p[k], p[k + 1]);
            k += 2;
        }
    for (int i = 0; i + 1 < d; ++i) {  // diagonal traceless generators
        H(i, i) += p[k];
        H(i + 1, i + 1) -= p[k];
        ++k;
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Vec phases = es.eigenvalues().unaryExpr(
        [](double x) { return std::exp(cxd(0.0, x)); });
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

inline MeasurementSet measurements_from_params(const BellFunctional& f, const DimVector& dim,
                                               const std::vector<double>& params) {
    MeasurementSet m;
    m.dim = dim;
    m.ops.resize(static_cast<std::size_t>(dim.parties()));
    std::size_t off = 0;
    for (int i = 0; i < dim.parties(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        const int d = dim.dims[iu];
        const int np = unitary_param_count(d);
        for (int x = 0; x < f.inputs_per_party[iu]; ++x) {
            std::vector<double> p(params.begin() + static_cast<long>(off),
                                  params.begin() + static_cast<long>(off + static_cast<std::size_t>(np)));
            off += static_cast<std::size_t>(np);
            const Mat U = unitary_from_params(p, d);
            std::vector<Mat> ops;
            for (int k = 0; k < d; ++k) ops.push_back(U.col(k) * U.col(k).adjoint());
            m.ops[iu].push_back(std::move(ops));
        }
    }
    return m;
}

}  // namespace detail

inline NondegeneracyProfile profile_search(const BellFunctional& f, const DimVector& dim,
                                           const std::vector<double>& eps1_grid,
                                           const ProfileSearchOptions& opts = {}) {
    if (dim.total() > 81) throw error("profile_search: supports total dimension <= 81");
    const double c_q = f.quantum_bound.value;

    std::size_t n_params = 0;
    for (int i = 0; i < dim.parties(); ++i)
        n_params += static_cast<std::size_t>(f.inputs_per_party[static_cast<std::size_t>(i)] *
                                             detail::unitary_param_count(dim.dims[static_cast<std::size_t>(i)]));

    NondegeneracyProfile prof;
    prof.functional = f.name;
    prof.dims = dim;
    prof.c_q = c_q;

    for (double eps1 : eps1_grid) {
        const double t = c_q - eps1;
        // penalized objective: l1 + l2 - penalty * max(0, t - l1)
        auto objective = [&](const std::vector<double>& params) {
            const auto m = detail::measurements_from_params(f, dim, params);
            const auto eig = eig_hermitian(bell_operator(f, m));
            const double l1 = eig.values[0], l2 = eig.values[1];
            return l1 + l2 - opts.penalty * std::max(0.0, t - l1);
        };

        double s2_best = -std::numeric_limits<double>::infinity();
        bool budget_hit = true;
        for (int r = 0; r < opts.restarts; ++r) {
            Rng rng(derive_seed(opts.seed, (static_cast<std::uint64_t>(r) << 20) ^
                                               static_cast<std::uint64_t>(
                                                   std::llround(eps1 * 1e6))));
            std::vector<double> params(n_params);
            for (auto& p : params) p = rng.uniform(-1.5, 1.5);
            double fval = objective(params);
            double step = 0.3;
            for (int it = 0; it < opts.iters_per_restart; ++it) {
                std::vector<double> cand = params;
                for (auto& p : cand) p += step * rng.normal();
                const double cv = objective(cand);
                if (cv > fval) {
                    fval = cv;
                    params = std::move(cand);
                    step *= 1.3;
                } else {
                    step *= 0.85;
                }
                if (step < 1e-7) {
                    budget_hit = false;
                    break;
                }
            }
            s2_best = std::max(s2_best, fval);
        }

        const double eps2_raw = 2.0 * c_q - eps1 - s2_best;
        const double eps2 = opts.safety * std::min(eps2_raw, c_q);
        if (eps2 > eps1 && eps2 > 0.0) {
            ProfileRow row;
            row.eps1 = eps1;
            row.eps2 = eps2;
            row.flagged = budget_hit;
            row.provenance = "profile_search oracle: " + std::to_string(opts.restarts) +
                             " restarts, safety " + std::to_string(opts.safety);
            prof.rows.push_back(row);
        }
    }
    std::sort(prof.rows.begin(), prof.rows.end(),
              [](const ProfileRow& a, const ProfileRow& b) { return a.eps1 < b.eps1; });
    prof.validate();
    return prof;
}

}  // namespace entcert
