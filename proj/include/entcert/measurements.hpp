// Measurement families: the phase-parameterized qutrit projector family,
// Pauli eigenbases, and computational bases, plus the settings-spec glue
// used by configuration files.
#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "entcert/types.hpp"

namespace entcert {

// Three mutually orthogonal rank-1 qutrit projectors built from
//   |o(k)> = (|0> + e^{i(a1 + 2pi k/3)}|1> + e^{i(a2 + 4pi k/3)}|2>) / sqrt(3).
// Orthogonality holds for every phase pair, so the family is a projective
// POVM for all (alpha1, alpha2).
inline std::vector<Mat> cglmp_projectors(double alpha1, double alpha2) {
    std::vector<Mat> out;
    out.reserve(3);
    for (int k = 0; k < 3; ++k) {
        Vec v(3);
        v(0) = 1.0;
        v(1) = std::exp(cxd(0.0, alpha1 + 2.0 * std::numbers::pi * k / 3.0));
        v(2) = std::exp(cxd(0.0, alpha2 + 4.0 * std::numbers::pi * k / 3.0));
        v /= std::sqrt(3.0);
        out.push_back(v * v.adjoint());
    }
    return out;
}

enum class PauliAxis { X, Y };

// Eigenprojectors of the chosen Pauli operator. Outcome 0 is the -1
// eigenvector, outcome 1 the +1 eigenvector (fixed convention).
inline std::vector<Mat> pauli_measurement(PauliAxis axis) {
    Vec plus(2), minus(2);
    if (axis == PauliAxis::X) {
        plus << 1.0, 1.0;
        minus << 1.0, -1.0;
    } else {
        plus << 1.0, cxd(0.0, 1.0);
        minus << 1.0, cxd(0.0, -1.0);
    }
    plus /= std::sqrt(2.0);
    minus /= std::sqrt(2.0);
    return {minus * minus.adjoint(), plus * plus.adjoint()};
}

inline std::vector<Mat> computational_basis(int d) {
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        Mat m = Mat::Zero(d, d);
        m(k, k) = 1.0;
        out.push_back(m);
    }
    return out;
}

// --- settings specifications (the schema the settings files use) ---

// Qutrit phase-family measurement; conjugate_outcomes relabels k -> -k mod 3,
// which realizes the conjugate-Fourier convention on that party.
struct QutritPhaseSpec {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    bool conjugate_outcomes = false;
};

struct PauliSpec {
    PauliAxis axis = PauliAxis::X;
};

struct ComputationalSpec {
    int dimension = 2;
};

using InputSpec = std::variant<QutritPhaseSpec, PauliSpec, ComputationalSpec>;

struct SettingsSpec {
    std::string name;
    DimVector dim;
    std::vector<std::vector<InputSpec>> party_inputs;  // [party][input]

    MeasurementSet realize() const {
        MeasurementSet m;
        m.dim = dim;
        m.ops.resize(party_inputs.size());
        for (std::size_t i = 0; i < party_inputs.size(); ++i) {
            for (const auto& spec : party_inputs[i]) {
                std::vector<Mat> ops;
                if (const auto* q = std::get_if<QutritPhaseSpec>(&spec)) {
                    if (dim.dims[i] != 3)
                        throw error("SettingsSpec: qutrit phase family on non-qutrit party");
                    ops = cglmp_projectors(q->alpha1, q->alpha2);
                    if (q->conjugate_outcomes) std::swap(ops[1], ops[2]);
                } else if (const auto* p = std::get_if<PauliSpec>(&spec)) {
                    if (dim.dims[i] != 2)
                        throw error("SettingsSpec: Pauli measurement on non-qubit party");
                    ops = pauli_measurement(p->axis);
                } else {
                    const auto& c = std::get<ComputationalSpec>(spec);
                    if (c.dimension != dim.dims[i])
                        throw error("SettingsSpec: computational basis dimension mismatch");
                    ops = computational_basis(c.dimension);
                }
                m.ops[i].push_back(std::move(ops));
            }
        }
        return m;
    }
};

// All parties measure Pauli X or Y; input 0 = X, input 1 = Y.
inline SettingsSpec ghz_xy_settings() {
    SettingsSpec s;
    s.name = "ghz3-xy";
    s.dim = DimVector{2, 2, 2};
    s.party_inputs.assign(3, {InputSpec{PauliSpec{PauliAxis::X}}, InputSpec{PauliSpec{PauliAxis::Y}}});
    return s;
}

}  // namespace entcert
