// Batch pipeline: certification runs, Poisson-bootstrap error bars, the
// beta sweep that regenerates the ideal-theory curves, and fixture
// simulation. Reports are deterministic functions of (inputs, options,
// master seed).
#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "entcert/catalog.hpp"
#include "entcert/correlation.hpp"
#include "entcert/entanglement.hpp"
#include "entcert/fidelity.hpp"
#include "entcert/io.hpp"
#include "entcert/purity.hpp"
#include "entcert/states.hpp"

namespace entcert {

struct Evidence {
    PurityMode mode = PurityMode::spectral;
    SpectralGap gap;                 // spectral mode
    NondegeneracyProfile profile;    // profile mode
    std::string description;
};

inline Evidence spectral_evidence(const BellFunctional& f, const MeasurementSet& settings) {
    MeasurementSet m = settings;
    for (std::size_t i = 0; i < m.ops.size(); ++i) {
        if (m.ops[i].size() < static_cast<std::size_t>(f.inputs_per_party[i]))
            throw error("spectral_evidence: settings provide fewer inputs than the functional");
        m.ops[i].resize(static_cast<std::size_t>(f.inputs_per_party[i]));
    }
    Evidence e;
    e.mode = PurityMode::spectral;
    e.gap = spectral_gap(f, m);
    e.description = "Bell-operator spectral gap at fixed measurements";
    return e;
}

inline Evidence profile_evidence(NondegeneracyProfile prof) {
    Evidence e;
    e.mode = PurityMode::profile;
    e.profile = std::move(prof);
    e.description = "non-degeneracy profile: " + e.profile.functional;
    return e;
}

struct PipelineOptions {
    double norm_tol = 1e-6;
    double ns_warn = 1e-2;
    ShopmOptions shopm;
    std::uint64_t seed = 1;
};

struct ValueWithSigma {
    double value = 0.0;
    std::optional<double> sigma;
};

struct CertificateReport {
    std::string functional_name;
    std::string mode;
    std::string evidence_description;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, fnv1a64)
    std::uint64_t seed = 0;
    int resamples = 0;
    int dropped_resamples = 0;

    ValueWithSigma bell, a1, fhat, gme, s_upper, sA_lower, ic, ree;

    bool a1_certified = false;   // false: no applicable evidence, trivial a1 = 1/D used
    bool gme_vacuous = false;
    bool ic_vacuous = false;
    double c_q = 0.0;
    SpectralGap gap;             // spectral mode only
    double used_eps2 = 0.0;      // profile mode only

    CorrelationWarnings warnings;
    FhatDiagnostics fhat_diagnostics;
    std::string fhat_settings_note;
};

namespace detail {

struct PipelinePoint {
    double bell = 0.0, a1 = 0.0, fhat = 1.0;
    EntanglementReport ent;
    bool a1_certified = false;
    double used_eps2 = 0.0;
    FhatDiagnostics fhat_diag;
};

inline PipelinePoint run_point(const Correlation& corr, const BellFunctional& f,
                               const Evidence& ev, const PipelineOptions& opts) {
    PipelinePoint out;

    // Bell value on the functional's inputs; correlations may record extra
    // settings, which then participate only in F-hat.
    const bool needs_restrict = corr.inputs_per_party != f.inputs_per_party;
    const double I = needs_restrict
                         ? evaluate(f, restrict_inputs(corr, f.inputs_per_party))
                         : evaluate(f, corr);
    if (I > f.quantum_bound.value + kBellSlack)
        throw error("certify: Bell value " + std::to_string(I) +
                    " exceeds the quantum bound " + std::to_string(f.quantum_bound.value) +
                    " for the declared dimensions; data inconsistent");
    out.bell = I;

    const int D = corr.dim.total();
    if (ev.mode == PurityMode::spectral) {
        const auto cert = a1_from_spectrum(I, ev.gap);
        out.a1 = std::max(cert.a1, 1.0 / D);
        out.a1_certified = !cert.vacuous;
    } else {
        const auto cert = a1_from_profile(I, ev.profile);
        if (cert) {
            out.a1 = cert->a1;
            out.a1_certified = !cert->vacuous;
            out.used_eps2 = std::get<ProfileRow>(cert->evidence).eps2;
        } else {
            out.a1 = 1.0 / D;  // trivial bound; downstream results are vacuous
            out.a1_certified = false;
        }
    }

    ShopmOptions so = opts.shopm;
    so.seed = derive_seed(opts.seed, 0xf1de11);
    const auto fb = fhat(corr, so);
    out.fhat = fb.value;
    out.fhat_diag = fb.diagnostics;

    out.ent = entanglement_report(out.a1, out.fhat, corr.dim);
    return out;
}

}  // namespace detail

// Runs evaluate -> a1 -> fhat -> entanglement bounds on a validated
// correlation. Vacuous certificates are ordinary report states.
inline CertificateReport certify(const Correlation& corr, const BellFunctional& f,
                                 const Evidence& ev, const PipelineOptions& opts = {}) {
    const auto warnings = corr.validate(opts.norm_tol, opts.ns_warn);
    const auto pt = detail::run_point(corr, f, ev, opts);

    CertificateReport r;
    r.functional_name = f.name;
    r.mode = (ev.mode == PurityMode::spectral) ? "spectral" : "profile";
    r.evidence_description = ev.description;
    r.seed = opts.seed;
    r.bell.value = pt.bell;
    r.a1.value = pt.a1;
    r.fhat.value = pt.fhat;
    r.gme.value = pt.ent.gme_lower;
    r.s_upper.value = pt.ent.s_upper;
    r.sA_lower.value = pt.ent.sA_lower;
    r.ic.value = pt.ent.ic_lower;
    r.ree.value = pt.ent.ree_lower;
    r.a1_certified = pt.a1_certified;
    r.gme_vacuous = pt.ent.gme_vacuous;
    r.ic_vacuous = pt.ent.ic_vacuous;
    r.c_q = f.quantum_bound.value;
    if (ev.mode == PurityMode::spectral) r.gap = ev.gap;
    r.used_eps2 = pt.used_eps2;
    r.warnings = warnings;
    r.fhat_diagnostics = pt.fhat_diag;
    r.fhat_settings_note = "F-hat minimized over all recorded settings";
    return r;
}

// Poisson bootstrap: every count is resampled independently from a Poisson
// law centered at the observed count, each setting renormalized, and the
// full pipeline rerun. Central values come from the observed data; sigma is
// the sample standard deviation across resamples.
inline CertificateReport bootstrap(const CountTable& counts, const BellFunctional& f,
                                   const Evidence& ev, const PipelineOptions& opts,
                                   int resamples, std::uint64_t seed) {
    if (resamples < 2) throw error("bootstrap: need at least 2 resamples");
    counts.validate();

    PipelineOptions central_opts = opts;
    central_opts.seed = seed;
    CertificateReport report = certify(counts.normalize(), f, ev, central_opts);
    report.resamples = resamples;
    report.seed = seed;

    struct Acc {
        std::vector<double> bell, a1, fhat, gme, su, sa, ic, ree;
    } acc;

    int dropped = 0;
    for (int r = 0; r < resamples; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r) + 1));
        CountTable ct = counts;
        for (auto& c : ct.counts) c = static_cast<double>(rng.poisson(c));
        try {
            Correlation corr = ct.normalize();
            corr.validate(opts.norm_tol, opts.ns_warn);
            PipelineOptions o = opts;
            o.seed = derive_seed(seed, 0x9000 + static_cast<std::uint64_t>(r));
            const auto pt = detail::run_point(corr, f, ev, o);
            acc.bell.push_back(pt.bell);
            acc.a1.push_back(pt.a1);
            acc.fhat.push_back(pt.fhat);
            acc.gme.push_back(pt.ent.gme_lower);
            acc.su.push_back(pt.ent.s_upper);
            acc.sa.push_back(pt.ent.sA_lower);
            acc.ic.push_back(pt.ent.ic_lower);
            acc.ree.push_back(pt.ent.ree_lower);
        } catch (const error&) {
            ++dropped;  // hard error in a resample: drop it, flag in report
        }
    }
    report.dropped_resamples = dropped;

    auto sample_sigma = [](const std::vector<double>& v) -> std::optional<double> {
        if (v.size() < 2) return std::nullopt;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    report.bell.sigma = sample_sigma(acc.bell);
    report.a1.sigma = sample_sigma(acc.a1);
    report.fhat.sigma = sample_sigma(acc.fhat);
    report.gme.sigma = sample_sigma(acc.gme);
    report.s_upper.sigma = sample_sigma(acc.su);
    report.sA_lower.sigma = sample_sigma(acc.sa);
    report.ic.sigma = sample_sigma(acc.ic);
    report.ree.sigma = sample_sigma(acc.ree);
    return report;
}

// --- beta sweep -------------------------------------------------------------

struct SweepRow {
    double beta = 0.0;
    double bell = 0.0;
    double a1 = 0.0;
    double fhat = 1.0;
    double ic_lower = 0.0;
};

// For each beta: build |Phi(beta)>, generate the ideal correlation at the
// functional's canonical settings (including the recorded computational
// input), and run the full pipeline.
inline std::vector<SweepRow> sweep_beta(const std::vector<double>& grid,
                                        const std::string& functional_name,
                                        PurityMode mode,
                                        const PipelineOptions& opts = {},
                                        const std::string& data_dir = default_data_dir()) {
    if (functional_name != "cglmp3" && functional_name != "tailored3")
        throw error("sweep_beta: functional must be cglmp3 or tailored3");
    for (double b : grid)
        if (b < 0.0 || b > 1.0) throw error("sweep_beta: grid point outside [0,1]");

    const BellFunctional f = functional_by_name(functional_name, data_dir);
    const SettingsSpec spec = canonical_settings(functional_name, data_dir);
    const MeasurementSet all_settings = spec.realize();

    Evidence ev;
    if (mode == PurityMode::spectral) {
        ev = spectral_evidence(f, all_settings);
    } else {
        ev = profile_evidence(
            load_profile(data_dir + "/profiles/" + functional_name + "_profile.json"));
    }

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (double beta : grid) {
        const PureState psi = make_phi_beta(beta);
        const Correlation corr = correlation_from_state(psi, all_settings);
        const auto pt = detail::run_point(corr, f, ev, opts);
        rows.push_back({beta, pt.bell, pt.a1, pt.fhat, pt.ent.ic_lower});
    }
    return rows;
}

inline void write_sweep_table(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw error("write_sweep_table: cannot write " + path);
    out << "beta\tbell_value\ta1\tfhat\tic_lower\n";
    out.precision(17);
    for (const auto& r : rows)
        out << r.beta << '\t' << r.bell << '\t' << r.a1 << '\t' << r.fhat << '\t'
            << r.ic_lower << '\n';
}

// --- report serialization -----------------------------------------------------

inline json report_to_json(const CertificateReport& r) {
    json j;
    j["schema"] = kReportSchema;
    json inputs;
    inputs["functional"] = r.functional_name;
    inputs["mode"] = r.mode;
    inputs["evidence"] = r.evidence_description;
    inputs["seed"] = r.seed;
    inputs["resamples"] = r.resamples;
    json digests = json::array();
    for (const auto& [path, digest] : r.input_digests)
        digests.push_back({{"path", path}, {"fnv1a64", digest}});
    inputs["file_digests"] = std::move(digests);
    j["inputs"] = std::move(inputs);

    auto vs = [](const ValueWithSigma& v) {
        json e;
        e["value"] = v.value;
        if (v.sigma) e["sigma"] = *v.sigma;
        return e;
    };
    j["bell_value"] = vs(r.bell);
    j["a1"] = vs(r.a1);
    j["fhat"] = vs(r.fhat);
    j["gme_lower"] = vs(r.gme);
    j["entropy_upper"] = vs(r.s_upper);
    j["marginal_entropy_lower"] = vs(r.sA_lower);
    j["coherent_info_lower"] = vs(r.ic);
    j["ree_lower"] = vs(r.ree);

    json flags;
    flags["a1_certified"] = r.a1_certified;
    flags["gme_vacuous"] = r.gme_vacuous;
    flags["ic_vacuous"] = r.ic_vacuous;
    j["flags"] = std::move(flags);

    json diag;
    diag["c_q"] = r.c_q;
    if (r.mode == "spectral") {
        diag["gap"] = {{"lambda1", r.gap.lambda1}, {"lambda2", r.gap.lambda2}};
    } else {
        diag["used_eps2"] = r.used_eps2;
    }
    diag["max_normalization_deviation"] = r.warnings.max_normalization_deviation;
    diag["max_no_signaling_deviation"] = r.warnings.max_no_signaling_deviation;
    diag["warnings"] = r.warnings.messages;
    diag["fhat"] = {{"restarts", r.fhat_diagnostics.restarts},
                    {"iterations", r.fhat_diagnostics.iterations},
                    {"all_converged", r.fhat_diagnostics.all_converged},
                    {"note", r.fhat_settings_note}};
    diag["dropped_resamples"] = r.dropped_resamples;
    j["diagnostics"] = std::move(diag);
    return j;
}

inline void save_report(const CertificateReport& r, const std::string& path) {
    detail::save_json(report_to_json(r), path);
}

// --- simulation --------------------------------------------------------------

struct PhiBetaSpec {
    double beta = 1.0;
};
struct Ghz3Spec {};
// GHZ mixed with white noise; visibility p reproduces Bell value 2p.
struct NoisyGhz3Spec {
    double visibility = 1.0;
};

using StateSpec = std::variant<PhiBetaSpec, Ghz3Spec, NoisyGhz3Spec>;

inline DensityMatrix realize_state(const StateSpec& spec) {
    if (const auto* pb = std::get_if<PhiBetaSpec>(&spec))
        return DensityMatrix::from_pure(make_phi_beta(pb->beta));
    if (std::get_if<Ghz3Spec>(&spec)) return DensityMatrix::from_pure(make_ghz3());
    const auto& ng = std::get<NoisyGhz3Spec>(spec);
    return mix_with_white_noise(make_ghz3(), ng.visibility);
}

inline StateSpec parse_state_spec(const std::string& text) {
    if (text == "ghz3") return Ghz3Spec{};
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    if (head == "phi-beta") {
        if (colon == std::string::npos) throw error("state spec phi-beta needs a parameter");
        return PhiBetaSpec{std::stod(text.substr(colon + 1))};
    }
    if (head == "ghz3-noisy") {
        if (colon == std::string::npos) throw error("state spec ghz3-noisy needs a parameter");
        return NoisyGhz3Spec{std::stod(text.substr(colon + 1))};
    }
    throw error("unknown state spec: " + text);
}

// Exact probabilities (shots == 0) or a multinomial count table with `shots`
// events per setting.
inline Correlation simulate_correlation(const StateSpec& state, const SettingsSpec& settings) {
    return correlation_from_state(realize_state(state), settings.realize());
}

inline CountTable simulate_counts(const StateSpec& state, const SettingsSpec& settings,
                                  long long shots, std::uint64_t seed) {
    if (shots <= 0) throw error("simulate_counts: shots must be positive");
    const Correlation c = simulate_correlation(state, settings);
    CountTable t;
    t.dim = c.dim;
    t.inputs_per_party = c.inputs_per_party;
    t.outcomes_per_party = c.outcomes_per_party;
    t.counts.assign(c.table.size(), 0.0);

    std::vector<int> xs(static_cast<std::size_t>(c.parties()), 0);
    std::uint64_t setting_index = 0;
    do {
        Rng rng(derive_seed(seed, setting_index++));
        std::vector<double> weights;
        std::vector<int> as(static_cast<std::size_t>(c.parties()), 0);
        do {
            weights.push_back(std::max(0.0, c.p(xs, as)));
        } while (next_index(as, c.outcomes_per_party));
        double total = 0.0;
        for (double w : weights) total += w;
        std::vector<long long> counts(weights.size(), 0);
        for (long long s = 0; s < shots; ++s) ++counts[rng.categorical(weights, total)];
        std::size_t k = 0;
        std::fill(as.begin(), as.end(), 0);
        do {
            t.n(xs, as) = static_cast<double>(counts[k++]);
        } while (next_index(as, c.outcomes_per_party));
    } while (next_index(xs, c.inputs_per_party));
    return t;
}

}  // namespace entcert
