// Correlation generation from states and measurements, partial trace, and
// table restriction.
#pragma once

#include <algorithm>
#include <vector>

#include "entcert/types.hpp"

namespace entcert {

// p(a|x) = Tr((M_{x_1}^{a_1} (x) ... (x) M_{x_n}^{a_n}) rho).
inline Correlation correlation_from_state(const DensityMatrix& rho, const MeasurementSet& m) {
    if (!(rho.dim == m.dim)) throw error("correlation_from_state: dimension mismatch");
    Correlation c(rho.dim, m.inputs_per_party(), m.outcomes_per_party());
    const int n = rho.dim.parties();
    std::vector<int> xs(static_cast<std::size_t>(n), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(n), 0);
        do {
            std::vector<Mat> factors;
            factors.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                const auto iu = static_cast<std::size_t>(i);
                factors.push_back(m.ops[iu][static_cast<std::size_t>(xs[iu])]
                                          [static_cast<std::size_t>(as[iu])]);
            }
            const double v = (kron_all(factors) * rho.entries).trace().real();
            c.p(xs, as) = std::max(0.0, v);
        } while (next_index(as, c.outcomes_per_party));
    } while (next_index(xs, c.inputs_per_party));
    return c;
}

inline Correlation correlation_from_state(const PureState& psi, const MeasurementSet& m) {
    return correlation_from_state(DensityMatrix::from_pure(psi), m);
}

// Reduced state on the kept parties (original order preserved).
inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const int n = rho.dim.parties();
    if (keep.empty()) throw error("partial_trace: empty keep set");
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int k : keep) {
        if (k < 0 || k >= n) throw error("partial_trace: party index out of range");
        if (kept[static_cast<std::size_t>(k)]) throw error("partial_trace: duplicate party index");
        kept[static_cast<std::size_t>(k)] = true;
    }

    std::vector<int> keep_sorted;
    std::vector<int> traced;
    for (int i = 0; i < n; ++i)
        (kept[static_cast<std::size_t>(i)] ? keep_sorted : traced).push_back(i);

    std::vector<int> keep_dims, traced_dims;
    for (int i : keep_sorted) keep_dims.push_back(rho.dim.dims[static_cast<std::size_t>(i)]);
    for (int i : traced) traced_dims.push_back(rho.dim.dims[static_cast<std::size_t>(i)]);

    const auto full_strides = strides_for(rho.dim.dims);
    int keep_total = 1;
    for (int d : keep_dims) keep_total *= d;

    Mat out = Mat::Zero(keep_total, keep_total);
    std::vector<int> ki(keep_dims.size(), 0), kj(keep_dims.size(), 0);
    std::vector<int> ti(std::max<std::size_t>(traced_dims.size(), 1), 0);

    auto full_index = [&](const std::vector<int>& kpart, const std::vector<int>& tpart) {
        int idx = 0;
        for (std::size_t a = 0; a < keep_sorted.size(); ++a)
            idx += kpart[a] * full_strides[static_cast<std::size_t>(keep_sorted[a])];
        for (std::size_t a = 0; a < traced.size(); ++a)
            idx += tpart[a] * full_strides[static_cast<std::size_t>(traced[a])];
        return idx;
    };

    int row = 0;
    do {
        int col = 0;
        std::fill(kj.begin(), kj.end(), 0);
        do {
            cxd sum = 0.0;
            if (traced.empty()) {
                sum = rho.entries(full_index(ki, {}), full_index(kj, {}));
            } else {
                std::fill(ti.begin(), ti.end(), 0);
                do {
                    sum += rho.entries(full_index(ki, ti), full_index(kj, ti));
                } while (next_index(ti, traced_dims));
            }
            out(row, col) = sum;
            ++col;
        } while (next_index(kj, keep_dims));
        ++row;
    } while (next_index(ki, keep_dims));

    return DensityMatrix(DimVector(keep_dims), std::move(out));
}

// Restriction to the leading `inputs` inputs of every party (outcome arity
// unchanged). Used to evaluate a functional on a correlation that records
// additional settings.
inline Correlation restrict_inputs(const Correlation& c, const std::vector<int>& inputs) {
    if (inputs.size() != static_cast<std::size_t>(c.parties()))
        throw error("restrict_inputs: arity vector length mismatch");
    for (int i = 0; i < c.parties(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (inputs[iu] < 1 || inputs[iu] > c.inputs_per_party[iu])
            throw error("restrict_inputs: requested inputs exceed available settings");
    }
    Correlation r(c.dim, inputs, c.outcomes_per_party);
    std::vector<int> xs(static_cast<std::size_t>(c.parties()), 0);
    do {
        std::vector<int> as(static_cast<std::size_t>(c.parties()), 0);
        do {
            r.p(xs, as) = c.p(xs, as);
        } while (next_index(as, c.outcomes_per_party));
    } while (next_index(xs, inputs));
    return r;
}

}  // namespace entcert
