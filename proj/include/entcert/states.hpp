// State families used by the simulator and the test oracles.
#pragma once

#include <cmath>

#include "entcert/types.hpp"

namespace entcert {

// |Phi(beta)> = (|00> + beta|11> + |22>) / sqrt(2 + beta^2) on a (3,3) system.
inline PureState make_phi_beta(double beta) {
    if (beta < 0.0 || beta > 1.0) throw error("make_phi_beta: beta must lie in [0,1]");
    Vec amp = Vec::Zero(9);
    const double norm = std::sqrt(2.0 + beta * beta);
    amp(0) = 1.0 / norm;
    amp(4) = beta / norm;
    amp(8) = 1.0 / norm;
    return PureState(DimVector{3, 3}, amp);
}

// |Psi>_3 = (|000> + i|111>) / sqrt(2) on a (2,2,2) system.
inline PureState make_ghz3() {
    Vec amp = Vec::Zero(8);
    amp(0) = cxd(1.0 / std::sqrt(2.0), 0.0);
    amp(7) = cxd(0.0, 1.0 / std::sqrt(2.0));
    return PureState(DimVector{2, 2, 2}, amp);
}

inline DensityMatrix maximally_mixed(const DimVector& dim) {
    const int D = dim.total();
    return DensityMatrix(dim, Mat::Identity(D, D) / static_cast<double>(D));
}

// p * rho + (1-p) * I/D; the standard isotropic-noise model for fixtures.
inline DensityMatrix mix_with_white_noise(const PureState& psi, double p) {
    if (p < 0.0 || p > 1.0) throw error("mix_with_white_noise: p must lie in [0,1]");
    const int D = psi.dim.total();
    Mat m = p * psi.density() + (1.0 - p) / D * Mat::Identity(D, D);
    return DensityMatrix(psi.dim, m);
}

}  // namespace entcert
