// Batch front end: simulate fixtures, certify recorded correlations,
// bootstrap error bars from count tables, and sweep the phi(beta) family.
#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "entcert/entcert.hpp"

namespace {

entcert::Evidence resolve_evidence(const std::string& mode, const std::string& evidence_path,
                                   const entcert::BellFunctional& f,
                                   const std::string& data_dir) {
    using namespace entcert;
    if (mode == "spectral") {
        const std::string path = evidence_path.empty()
                                     ? data_dir + "/settings/" + f.name + "_canonical.json"
                                     : evidence_path;
        if (f.name == "mabk3" && evidence_path.empty())
            return spectral_evidence(f, ghz_xy_settings().realize());
        return spectral_evidence(f, load_settings(path).realize());
    }
    if (mode == "profile") {
        const std::string path = evidence_path.empty()
                                     ? data_dir + "/profiles/" + f.name + "_profile.json"
                                     : evidence_path;
        return profile_evidence(load_profile(path));
    }
    throw error("unknown mode: " + mode + " (expected spectral or profile)");
}

void print_warnings(const entcert::CorrelationWarnings& w) {
    for (const auto& msg : w.messages) std::cerr << "warning: " << msg << "\n";
}

void print_report_summary(const entcert::CertificateReport& r) {
    auto line = [](const char* name, const entcert::ValueWithSigma& v) {
        std::cout << "  " << name << " = " << v.value;
        if (v.sigma) std::cout << " +- " << *v.sigma;
        std::cout << "\n";
    };
    std::cout << "functional " << r.functional_name << " (" << r.mode << " evidence)\n";
    line("bell_value", r.bell);
    line("a1        ", r.a1);
    line("fhat      ", r.fhat);
    line("gme_lower ", r.gme);
    line("ic_lower  ", r.ic);
    line("ree_lower ", r.ree);
    if (!r.a1_certified) std::cout << "  note: purity certificate vacuous (trivial a1)\n";
    if (r.ic_vacuous) std::cout << "  note: coherent-information certificate vacuous\n";
    if (r.dropped_resamples > 0)
        std::cout << "  note: " << r.dropped_resamples << " resamples dropped\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace entcert;

    CLI::App app{"semi-device-independent entanglement certification toolkit"};
    app.require_subcommand(1);

    std::string data_dir = default_data_dir();
    app.add_option("--data-dir", data_dir, "configuration data directory");

    // --- simulate ---
    auto* sim = app.add_subcommand("simulate", "generate a correlation or counts file");
    std::string sim_state = "ghz3", sim_settings, sim_out;
    long long sim_shots = 0;
    std::uint64_t sim_seed = 1;
    sim->add_option("--state", sim_state,
                    "state spec: phi-beta:<b> | ghz3 | ghz3-noisy:<visibility>")
        ->required();
    sim->add_option("--settings", sim_settings,
                    "settings file, or one of: cglmp3, tailored3, mabk3 (canonical)")
        ->required();
    sim->add_option("--out", sim_out, "output path")->required();
    sim->add_option("--shots", sim_shots, "events per setting (0 = exact probabilities)");
    sim->add_option("--seed", sim_seed, "sampling seed");

    // --- certify ---
    auto* cert = app.add_subcommand("certify", "run the certification pipeline on a correlation");
    std::string cert_corr, cert_functional = "cglmp3", cert_mode = "spectral",
                cert_evidence, cert_out;
    double cert_tol = 1e-6;
    std::uint64_t cert_seed = 1;
    cert->add_option("--correlation", cert_corr, "correlation file")->required();
    cert->add_option("--functional", cert_functional,
                     "cglmp3 | mabk3 | tailored3 | path to a functional config");
    cert->add_option("--mode", cert_mode, "spectral | profile");
    cert->add_option("--evidence", cert_evidence,
                     "settings file (spectral) or profile file (profile); "
                     "defaults to the canonical data files");
    cert->add_option("--tolerance", cert_tol, "normalization tolerance");
    cert->add_option("--seed", cert_seed, "master seed");
    cert->add_option("--out", cert_out, "report output path");

    // --- bootstrap ---
    auto* boot = app.add_subcommand("bootstrap", "Poisson-bootstrap error bars from counts");
    std::string boot_counts, boot_functional = "mabk3", boot_mode = "spectral",
                boot_evidence, boot_out;
    int boot_resamples = 100;
    std::uint64_t boot_seed = 1;
    double boot_tol = 1e-6;
    boot->add_option("--counts", boot_counts, "counts file")->required();
    boot->add_option("--functional", boot_functional,
                     "cglmp3 | mabk3 | tailored3 | path to a functional config");
    boot->add_option("--mode", boot_mode, "spectral | profile");
    boot->add_option("--evidence", boot_evidence, "evidence file (see certify)");
    boot->add_option("--resamples", boot_resamples, "number of Poisson resamples");
    boot->add_option("--seed", boot_seed, "master seed");
    boot->add_option("--tolerance", boot_tol, "normalization tolerance");
    boot->add_option("--out", boot_out, "report output path");

    // --- sweep ---
    auto* sweep = app.add_subcommand("sweep", "ideal-data beta sweep of |Phi(beta)>");
    std::string sweep_functional = "cglmp3", sweep_mode = "spectral", sweep_out;
    double sweep_lo = 0.3, sweep_hi = 1.0;
    int sweep_points = 71;
    sweep->add_option("--functional", sweep_functional, "cglmp3 | tailored3");
    sweep->add_option("--mode", sweep_mode, "spectral | profile");
    sweep->add_option("--from", sweep_lo, "grid start");
    sweep->add_option("--to", sweep_hi, "grid end");
    sweep->add_option("--points", sweep_points, "grid size");
    sweep->add_option("--out", sweep_out, "output table path (TSV)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) {
            const StateSpec state = parse_state_spec(sim_state);
            SettingsSpec settings;
            if (sim_settings == "cglmp3" || sim_settings == "tailored3" ||
                sim_settings == "mabk3")
                settings = canonical_settings(sim_settings, data_dir);
            else
                settings = load_settings(sim_settings);
            if (sim_shots > 0) {
                save_counts(simulate_counts(state, settings, sim_shots, sim_seed), sim_out);
            } else {
                save_correlation(simulate_correlation(state, settings), sim_out);
            }
            std::cout << "wrote " << sim_out << "\n";
        } else if (*cert) {
            const BellFunctional f = functional_by_name(cert_functional, data_dir);
            const Evidence ev = resolve_evidence(cert_mode, cert_evidence, f, data_dir);
            auto loaded = load_correlation(cert_corr, cert_tol);
            print_warnings(loaded.warnings);
            PipelineOptions opts;
            opts.norm_tol = cert_tol;
            opts.seed = cert_seed;
            CertificateReport r = certify(loaded.correlation, f, ev, opts);
            r.input_digests.push_back({cert_corr, file_digest(cert_corr)});
            print_report_summary(r);
            if (!cert_out.empty()) save_report(r, cert_out);
        } else if (*boot) {
            const BellFunctional f = functional_by_name(boot_functional, data_dir);
            const Evidence ev = resolve_evidence(boot_mode, boot_evidence, f, data_dir);
            const CountTable counts = load_counts(boot_counts);
            PipelineOptions opts;
            opts.norm_tol = boot_tol;
            CertificateReport r = bootstrap(counts, f, ev, opts, boot_resamples, boot_seed);
            r.input_digests.push_back({boot_counts, file_digest(boot_counts)});
            print_report_summary(r);
            if (!boot_out.empty()) save_report(r, boot_out);
        } else if (*sweep) {
            std::vector<double> grid;
            for (int i = 0; i < sweep_points; ++i)
                grid.push_back(sweep_points == 1
                                   ? sweep_lo
                                   : sweep_lo + (sweep_hi - sweep_lo) * i / (sweep_points - 1));
            const PurityMode mode =
                (sweep_mode == "profile") ? PurityMode::profile : PurityMode::spectral;
            const auto rows = sweep_beta(grid, sweep_functional, mode, {}, data_dir);
            write_sweep_table(rows, sweep_out);
            std::cout << "wrote " << sweep_out << " (" << rows.size() << " rows)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
