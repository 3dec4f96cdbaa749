// Domain types: dimension vectors, states, measurement sets, correlations.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "entcert/linalg.hpp"

namespace entcert {

constexpr int kMaxTotalDimension = 4096;

// Declared local dimensions, one entry per party. Party 1 is the slowest
// tensor index everywhere (lexicographic order).
struct DimVector {
    std::vector<int> dims;

    DimVector() = default;
    explicit DimVector(std::vector<int> d) : dims(std::move(d)) { validate(); }
    DimVector(std::initializer_list<int> d) : dims(d) { validate(); }

    int parties() const { return static_cast<int>(dims.size()); }

    int total() const {
        long long t = 1;
        for (int d : dims) t *= d;
        return static_cast<int>(t);
    }

    void validate() const {
        if (dims.empty()) throw error("DimVector: need at least 1 party");
        long long t = 1;
        for (int d : dims) {
            if (d < 2) throw error("DimVector: every local dimension must be >= 2");
            t *= d;
            if (t > kMaxTotalDimension)
                throw error("DimVector: total dimension exceeds dense-storage guard " +
                            std::to_string(kMaxTotalDimension));
        }
    }

    bool operator==(const DimVector& o) const { return dims == o.dims; }
};

struct PureState {
    DimVector dim;
    Vec amplitudes;

    PureState() = default;
    PureState(DimVector d, Vec amp) : dim(std::move(d)), amplitudes(std::move(amp)) {
        if (amplitudes.size() != dim.total())
            throw error("PureState: amplitude length does not match dimensions");
        if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
            throw error("PureState: amplitudes are not unit-norm");
    }

    Mat density() const { return amplitudes * amplitudes.adjoint(); }
};

struct DensityMatrix {
    DimVector dim;
    Mat entries;

    DensityMatrix() = default;
    DensityMatrix(DimVector d, Mat m) : dim(std::move(d)), entries(std::move(m)) {
        const int D = dim.total();
        if (entries.rows() != D || entries.cols() != D)
            throw error("DensityMatrix: matrix size does not match dimensions");
        if (hermiticity_defect(entries) > 1e-10)
            throw error("DensityMatrix: not Hermitian within 1e-10");
        if (std::abs(entries.trace().real() - 1.0) > 1e-10 ||
            std::abs(entries.trace().imag()) > 1e-10)
            throw error("DensityMatrix: trace differs from 1 beyond 1e-10");
        const auto eig = eig_hermitian(entries);
        if (eig.values.back() < -1e-10)
            throw error("DensityMatrix: negative eigenvalue below -1e-10");
    }

    static DensityMatrix from_pure(const PureState& psi) {
        return DensityMatrix(psi.dim, psi.density());
    }
};

// Per party, per input, a list of outcome operators.
struct MeasurementSet {
    DimVector dim;
    // ops[party][input][outcome]
    std::vector<std::vector<std::vector<Mat>>> ops;

    int parties() const { return static_cast<int>(ops.size()); }
    int inputs(int party) const { return static_cast<int>(ops[static_cast<std::size_t>(party)].size()); }
    int outcomes(int party, int input) const {
        return static_cast<int>(ops[static_cast<std::size_t>(party)][static_cast<std::size_t>(input)].size());
    }

    std::vector<int> inputs_per_party() const {
        std::vector<int> v;
        for (int i = 0; i < parties(); ++i) v.push_back(inputs(i));
        return v;
    }

    // Outcome count of input 0; validate() enforces that it is uniform per party.
    std::vector<int> outcomes_per_party() const {
        std::vector<int> v;
        for (int i = 0; i < parties(); ++i) v.push_back(outcomes(i, 0));
        return v;
    }

    void validate(double psd_tol = 1e-10, double sum_tol = 1e-10) const {
        if (static_cast<int>(ops.size()) != dim.parties())
            throw error("MeasurementSet: party count mismatch");
        for (int i = 0; i < parties(); ++i) {
            const int d = dim.dims[static_cast<std::size_t>(i)];
            const auto& party = ops[static_cast<std::size_t>(i)];
            if (party.empty()) throw error("MeasurementSet: party with no inputs");
            const std::size_t n_out = party.front().size();
            for (const auto& input : party) {
                if (input.size() != n_out)
                    throw error("MeasurementSet: ragged outcome counts within a party");
                Mat sum = Mat::Zero(d, d);
                for (const auto& op : input) {
                    if (op.rows() != d || op.cols() != d)
                        throw error("MeasurementSet: operator size does not match local dimension");
                    if (hermiticity_defect(op) > psd_tol)
                        throw error("MeasurementSet: outcome operator not Hermitian");
                    const auto eig = eig_hermitian(op);
                    if (eig.values.back() < -psd_tol)
                        throw error("MeasurementSet: outcome operator not positive semidefinite");
                    sum += op;
                }
                if ((sum - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > sum_tol)
                    throw error("MeasurementSet: outcome operators do not sum to identity");
            }
        }
    }

    bool is_projective(double tol = 1e-8) const {
        for (const auto& party : ops)
            for (const auto& input : party)
                for (const auto& op : input)
                    if ((op * op - op).cwiseAbs().maxCoeff() > tol) return false;
        return true;
    }
};

struct CorrelationWarnings {
    double max_normalization_deviation = 0.0;
    double max_no_signaling_deviation = 0.0;
    std::vector<std::string> messages;
};

// Probability table p(a|x) over explicit input and outcome tuples.
struct Correlation {
    DimVector dim;                    // declared local dimensions (semi-DI assumption)
    std::vector<int> inputs_per_party;
    std::vector<int> outcomes_per_party;
    std::vector<double> table;        // indexed by (x, a), x slowest

    Correlation() = default;
    Correlation(DimVector d, std::vector<int> inputs, std::vector<int> outcomes)
        : dim(std::move(d)),
          inputs_per_party(std::move(inputs)),
          outcomes_per_party(std::move(outcomes)) {
        if (dim.parties() < 2)
            throw error("Correlation: need at least 2 parties");
        if (inputs_per_party.size() != static_cast<std::size_t>(dim.parties()) ||
            outcomes_per_party.size() != static_cast<std::size_t>(dim.parties()))
            throw error("Correlation: arity vectors must match party count");
        table.assign(static_cast<std::size_t>(setting_count()) *
                         static_cast<std::size_t>(outcome_count()),
                     0.0);
    }

    int parties() const { return dim.parties(); }

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

    std::vector<int> input_strides() const { return strides_for(inputs_per_party); }
    std::vector<int> outcome_strides() const { return strides_for(outcomes_per_party); }

    double& p(const std::vector<int>& xs, const std::vector<int>& as) {
        return table[static_cast<std::size_t>(offset(xs, as))];
    }
    double p(const std::vector<int>& xs, const std::vector<int>& as) const {
        return table[static_cast<std::size_t>(offset(xs, as))];
    }

    int offset(const std::vector<int>& xs, const std::vector<int>& as) const {
        return flat_index(xs, input_strides()) * outcome_count() +
               flat_index(as, outcome_strides());
    }

    // Checks entry range and per-setting normalization; collects no-signaling
    // deviations as warnings (they never fail validation).
    CorrelationWarnings validate(double norm_tol = 1e-6, double ns_warn = 1e-2) const {
        CorrelationWarnings w;
        std::vector<int> xs(static_cast<std::size_t>(parties()), 0);
        do {
            double sum = 0.0;
            std::vector<int> as(static_cast<std::size_t>(parties()), 0);
            do {
                const double v = p(xs, as);
                if (v < -1e-12 || v > 1.0 + 1e-12)
                    throw error("Correlation: probability outside [0,1] at setting " +
                                tuple_str(xs));
                sum += v;
            } while (next_index(as, outcomes_per_party));
            w.max_normalization_deviation =
                std::max(w.max_normalization_deviation, std::abs(sum - 1.0));
            if (std::abs(sum - 1.0) > norm_tol)
                throw error("Correlation: setting " + tuple_str(xs) +
                            " sums to " + std::to_string(sum) + ", violating normalization");
        } while (next_index(xs, inputs_per_party));

        const double ns = max_no_signaling_deviation();
        w.max_no_signaling_deviation = ns;
        if (ns > ns_warn) {
            std::ostringstream os;
            os << "no-signaling deviation " << ns << " exceeds warn threshold " << ns_warn;
            w.messages.push_back(os.str());
        }
        return w;
    }

    // Largest change of any single-party marginal under other parties' inputs.
    double max_no_signaling_deviation() const {
        double worst = 0.0;
        const int n = parties();
        for (int i = 0; i < n; ++i) {
            const auto iu = static_cast<std::size_t>(i);
            // for each input and outcome of party i, marginal must not depend
            // on the remaining parties' inputs
            std::vector<int> others_inputs;
            std::vector<int> others_idx;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    others_inputs.push_back(inputs_per_party[static_cast<std::size_t>(j)]);
                    others_idx.push_back(j);
                }
            for (int xi = 0; xi < inputs_per_party[iu]; ++xi) {
                for (int ai = 0; ai < outcomes_per_party[iu]; ++ai) {
                    std::optional<double> ref;
                    std::vector<int> rest(others_inputs.size(), 0);
                    do {
                        std::vector<int> xs(static_cast<std::size_t>(n), 0);
                        xs[iu] = xi;
                        for (std::size_t k = 0; k < others_idx.size(); ++k)
                            xs[static_cast<std::size_t>(others_idx[k])] = rest[k];
                        double marg = 0.0;
                        std::vector<int> as(static_cast<std::size_t>(n), 0);
                        do {
                            if (as[iu] == ai) marg += p(xs, as);
                        } while (next_index(as, outcomes_per_party));
                        if (!ref)
                            ref = marg;
                        else
                            worst = std::max(worst, std::abs(marg - *ref));
                    } while (next_index(rest, others_inputs));
                }
            }
        }
        return worst;
    }

    static std::string tuple_str(const std::vector<int>& v) {
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    }
};

}  // namespace entcert
