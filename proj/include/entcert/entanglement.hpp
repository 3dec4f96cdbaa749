// Converts the certified pair (a1, F-hat) plus the declared dimensions into
// lower bounds on entanglement measures.
//
// entropy_upper is the maximum von Neumann entropy of any spectrum whose
// largest weight is a1: h(a1) + (1-a1) log2(D-1).
//
// marginal_entropy_lower: <phi|rho|phi> >= a1 |<phi|psi_1>|^2 for the top
// eigenstate psi_1, so every product state has |<phi|psi_1>|^2 <= F^2/a1;
// in particular the top Schmidt weight of psi_1 is at most F^2/a1, hence
// S(psi_1, A) >= -log2(F^2/a1), and concavity of entropy over the orthogonal
// decomposition gives S(rho_A) >= a1 S(psi_1, A).
#pragma once

#include <algorithm>
#include <cmath>

#include "entcert/types.hpp"

namespace entcert {

inline double binary_entropy(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

namespace detail {

// GME objective at overlap parameter c (the paper's widetext bound).
inline double gme_objective(double a1, double fhat, double c) {
    const double c2 = c * c;
    if (c2 >= 1.0) return (a1 >= 1.0) ? 1.0 - fhat * fhat : 0.0;  // analytic c -> 1 limit
    const double sa = std::sqrt(a1);
    const double inner = fhat * c / sa + std::sqrt(std::max(0.0, 1.0 - fhat * fhat / a1)) *
                                             std::sqrt(std::max(0.0, 1.0 - c2));
    return (a1 - c2) / (1.0 - c2) * (1.0 - inner * inner);
}

}  // namespace detail

// Lower bound on the geometric measure of entanglement:
//   max over c in [fhat/sqrt(a1), sqrt(a1)] of
//   ((a1-c^2)/(1-c^2)) (1 - (fhat c / sqrt(a1) + sqrt(1-fhat^2/a1) sqrt(1-c^2))^2).
// Evaluated on a 2001-point grid followed by golden-section refinement.
// Requires fhat <= a1; otherwise the method certifies nothing and returns 0.
inline double gme_lower(double a1, double fhat) {
    if (!(a1 > 0.0 && a1 <= 1.0)) throw error("gme_lower: a1 must lie in (0,1]");
    if (fhat < 0.0) throw error("gme_lower: fhat must be nonnegative");
    if (fhat > a1) return 0.0;

    const double lo = fhat / std::sqrt(a1);
    const double hi = std::sqrt(a1);
    if (hi <= lo) return 0.0;

    const int grid = 2001;
    double best_c = lo, best = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double c = lo + (hi - lo) * i / (grid - 1);
        const double v = detail::gme_objective(a1, fhat, c);
        if (v > best) {
            best = v;
            best_c = c;
        }
    }
    // golden-section refinement around the best grid point
    const double step = (hi - lo) / (grid - 1);
    double a = std::max(lo, best_c - step), b = std::min(hi, best_c + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = detail::gme_objective(a1, fhat, x1), f2 = detail::gme_objective(a1, fhat, x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = detail::gme_objective(a1, fhat, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = detail::gme_objective(a1, fhat, x1);
        }
    }
    best = std::max(best, detail::gme_objective(a1, fhat, (a + b) / 2));
    return std::max(0.0, best);
}

// Max entropy of a D-dimensional spectrum with largest weight a1, in bits.
inline double entropy_upper(double a1, int D) {
    if (D < 2) throw error("entropy_upper: D must be at least 2");
    if (a1 < 1.0 / D - 1e-12)
        throw error("entropy_upper: a1 below 1/D is inconsistent with unit trace");
    if (a1 > 1.0 + 1e-12) throw error("entropy_upper: a1 exceeds 1");
    const double a = std::clamp(a1, 1.0 / D, 1.0);
    return binary_entropy(a) + (1.0 - a) * std::log2(static_cast<double>(D - 1));
}

// S(rho_A) >= -a1 log2(min(1, fhat^2 / a1)), in bits.
inline double marginal_entropy_lower(double a1, double fhat) {
    if (!(a1 > 0.0 && a1 <= 1.0)) throw error("marginal_entropy_lower: a1 must lie in (0,1]");
    if (fhat <= 0.0) throw error("marginal_entropy_lower: fhat must be positive");
    const double ratio = std::min(1.0, fhat * fhat / a1);
    return -a1 * std::log2(ratio);
}

// I_C >= marginal_entropy_lower - entropy_upper; may be negative, in which
// case the certificate is vacuous but the value is reported as-is.
inline double coherent_info_lower(double a1, double fhat, int D) {
    return marginal_entropy_lower(a1, fhat) - entropy_upper(a1, D);
}

// E_R >= -2 log2(fhat) - S(rho), floored at 0.
inline double ree_lower(double fhat, double s_upper) {
    if (fhat <= 0.0) throw error("ree_lower: fhat must be positive (zero signals corrupted F-hat)");
    if (fhat > 1.0 + 1e-12) throw error("ree_lower: fhat exceeds 1");
    if (s_upper < 0.0) throw error("ree_lower: entropy bound must be nonnegative");
    return std::max(0.0, -2.0 * std::log2(std::min(1.0, fhat)) - s_upper);
}

struct EntanglementReport {
    double gme_lower = 0.0;
    double s_upper = 0.0;
    double sA_lower = 0.0;
    double ic_lower = 0.0;
    double ree_lower = 0.0;
    bool ic_vacuous = false;   // ic_lower <= 0 certifies nothing
    bool gme_vacuous = false;  // fhat > a1: the GME route does not apply
    // echoed inputs
    double a1 = 0.0;
    double fhat = 1.0;
    int total_dimension = 0;
    DimVector dims;
};

inline EntanglementReport entanglement_report(double a1, double fhat, const DimVector& dims) {
    EntanglementReport r;
    r.a1 = a1;
    r.fhat = fhat;
    r.dims = dims;
    r.total_dimension = dims.total();
    r.gme_lower = gme_lower(a1, fhat);
    r.gme_vacuous = (fhat > a1);
    r.s_upper = entropy_upper(a1, r.total_dimension);
    r.sA_lower = marginal_entropy_lower(a1, fhat);
    r.ic_lower = r.sA_lower - r.s_upper;
    r.ic_vacuous = (r.ic_lower <= 0.0);
    r.ree_lower = ree_lower(fhat, r.s_upper);
    return r;
}

}  // namespace entcert
