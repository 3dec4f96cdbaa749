#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "entcert/pipeline.hpp"
#include "oracles.hpp"

using namespace entcert;
namespace fs = std::filesystem;

namespace {
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("entcert_pipe_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}
}  // namespace

TEST_CASE("certify the ideal GHZ/MABK endpoint") {
    const auto f = mabk3();
    const auto settings = ghz_xy_settings().realize();
    const auto corr = correlation_from_state(DensityMatrix::from_pure(make_ghz3()), settings);
    const auto ev = spectral_evidence(f, settings);
    const auto r = certify(corr, f, ev);
    REQUIRE(r.bell.value == Catch::Approx(2.0).margin(1e-9));
    REQUIRE(r.a1.value == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(r.fhat.value == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-6));
    REQUIRE(r.gme.value == Catch::Approx(0.5).margin(2e-6));
    REQUIRE(r.a1_certified);
    REQUIRE_FALSE(r.gme_vacuous);
}

TEST_CASE("uniform correlation produces an entirely vacuous report") {
    const auto f = mabk3();
    Correlation c(DimVector{2, 2, 2}, {2, 2, 2}, {2, 2, 2});
    for (auto& v : c.table) v = 1.0 / 8.0;
    const auto ev = spectral_evidence(f, ghz_xy_settings().realize());
    const auto r = certify(c, f, ev);
    REQUIRE(r.bell.value < f.classical_bound);
    REQUIRE_FALSE(r.a1_certified);
    REQUIRE(r.ic_vacuous);
    REQUIRE(r.gme.value == 0.0);
}

TEST_CASE("Bell value above the quantum bound is a hard error") {
    // no-signaling box tuned to satisfy every positive CGLMP chain condition
    const auto f = cglmp3();
    Correlation c(DimVector{3, 3}, {2, 2}, {3, 3});
    auto fill = [&](int x, int y, int shift) {
        for (int a = 0; a < 3; ++a) {
            std::vector<int> xs{x, y}, as{a, (a + shift) % 3};
            c.p(xs, as) = 1.0 / 3.0;
        }
    };
    fill(0, 0, 0);   // B1 = A1
    fill(1, 0, 1);   // B1 = A2 + 1
    fill(1, 1, 0);   // B2 = A2
    fill(0, 1, 0);   // B2 = A1
    const auto ev = profile_evidence(load_profile(default_data_dir() +
                                                  "/profiles/cglmp3_profile.json"));
    REQUIRE_THROWS_AS(certify(c, f, ev), error);
}

TEST_CASE("correlations with extra settings evaluate on the leading inputs") {
    const auto f = cglmp3();
    const auto settings = canonical_settings("cglmp3").realize();  // includes computational
    const auto corr = correlation_from_state(make_phi_beta(1.0), settings);
    const auto ev = spectral_evidence(f, settings);
    const auto r = certify(corr, f, ev);
    REQUIRE(r.bell.value == Catch::Approx(2.8729340).margin(1e-6));
    // fhat benefits from the computational setting
    REQUIRE(r.fhat.value == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-9));
}

TEST_CASE("bootstrap determinism and dropped-resample accounting") {
    const auto f = mabk3();
    const auto ev = spectral_evidence(f, ghz_xy_settings().realize());
    const auto counts = simulate_counts(NoisyGhz3Spec{0.9475}, ghz_xy_settings(), 600, 7);

    SECTION("identical seeds give byte-identical reports") {
        TempDir tmp;
        const auto r1 = bootstrap(counts, f, ev, {}, 20, 12345);
        const auto r2 = bootstrap(counts, f, ev, {}, 20, 12345);
        const auto p1 = tmp.file("r1.json");
        const auto p2 = tmp.file("r2.json");
        save_report(r1, p1);
        save_report(r2, p2);
        REQUIRE(slurp(p1) == slurp(p2));
    }
    SECTION("different seeds give different sigma") {
        const auto r1 = bootstrap(counts, f, ev, {}, 20, 1);
        const auto r2 = bootstrap(counts, f, ev, {}, 20, 2);
        REQUIRE(r1.bell.sigma.has_value());
        REQUIRE(r2.bell.sigma.has_value());
        REQUIRE(*r1.bell.sigma != *r2.bell.sigma);
        // but central values agree (same observed data)
        REQUIRE(r1.bell.value == r2.bell.value);
    }
    SECTION("sigma magnitude is sane at N = 600") {
        const auto r = bootstrap(counts, f, ev, {}, 100, 99);
        REQUIRE(*r.bell.sigma > 0.004);
        REQUIRE(*r.bell.sigma < 0.04);
    }
    SECTION("resamples below 2 rejected") {
        REQUIRE_THROWS_AS(bootstrap(counts, f, ev, {}, 1, 1), error);
    }
}

TEST_CASE("simulate writes files whose Bell value matches in-memory evaluation") {
    TempDir tmp;
    const auto corr = simulate_correlation(PhiBetaSpec{0.79}, canonical_settings("cglmp3"));
    const auto p = tmp.file("phi79.json");
    save_correlation(corr, p);
    const auto loaded = load_correlation(p);
    const auto f = cglmp3();
    const double direct = evaluate(f, restrict_inputs(corr, f.inputs_per_party));
    const double via_file = evaluate(f, restrict_inputs(loaded.correlation, f.inputs_per_party));
    REQUIRE(via_file == Catch::Approx(direct).margin(1e-12));
}

TEST_CASE("finite-shot simulation is deterministic and converges") {
    const auto c1 = simulate_counts(Ghz3Spec{}, ghz_xy_settings(), 100000, 31);
    const auto c2 = simulate_counts(Ghz3Spec{}, ghz_xy_settings(), 100000, 31);
    REQUIRE(c1.counts == c2.counts);

    const auto f = mabk3();
    const double exact = evaluate(
        f, correlation_from_state(DensityMatrix::from_pure(make_ghz3()),
                                  ghz_xy_settings().realize()));
    const double sampled = evaluate(f, c1.normalize());
    REQUIRE(std::abs(sampled - exact) < 3.0 / std::sqrt(100000.0) * 2.0);
}

TEST_CASE("beta sweep basics") {
    const std::vector<double> grid{0.64, 0.8, 1.0};
    const auto rows = sweep_beta(grid, "tailored3", PurityMode::spectral);
    REQUIRE(rows.size() == 3);
    // tailored functional: certified coherent information increases toward
    // the maximally entangled state
    REQUIRE(rows[0].ic_lower < rows[1].ic_lower);
    REQUIRE(rows[1].ic_lower < rows[2].ic_lower);
    REQUIRE(rows[2].a1 == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(rows[2].fhat == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-9));
    SECTION("table writer emits one row per grid point") {
        TempDir tmp;
        const auto p = tmp.file("sweep.tsv");
        write_sweep_table(rows, p);
        const auto text = slurp(p);
        REQUIRE(text.find("beta\tbell_value") == 0);
        REQUIRE(std::count(text.begin(), text.end(), '\n') == 4);
    }
}

TEST_CASE("certify reports are byte-identical across reruns") {
    TempDir tmp;
    const auto f = mabk3();
    const auto settings = ghz_xy_settings().realize();
    const auto corr = correlation_from_state(DensityMatrix::from_pure(make_ghz3()), settings);
    const auto ev = spectral_evidence(f, settings);
    PipelineOptions opts;
    opts.seed = 777;
    const auto p1 = tmp.file("a.json");
    const auto p2 = tmp.file("b.json");
    save_report(certify(corr, f, ev, opts), p1);
    save_report(certify(corr, f, ev, opts), p2);
    REQUIRE(slurp(p1) == slurp(p2));
}

TEST_CASE("pipeline soundness on ideal simulated data (property)") {
    Rng rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        const DimVector dim = (trial % 2 == 0) ? DimVector{3, 3} : DimVector{2, 2};
        const auto psi = oracles::random_pure_state(dim, rng);
        const auto rho = DensityMatrix::from_pure(psi);
        const auto m = oracles::random_projective(
            dim, std::vector<int>(static_cast<std::size_t>(dim.parties()), 2), rng);
        const auto corr = correlation_from_state(rho, m);

        // spectral evidence from the true measurements; every certified bound
        // must stay below the exact quantity for the known state
        BellFunctional f = (dim.parties() == 2 && dim.dims[0] == 3) ? cglmp3() : cglmp3();
        if (dim.dims[0] == 2) {
            // 2x2 outcome case: reuse MABK structure is not applicable; use a
            // simple CHSH-style functional
            f = BellFunctional{};
            f.name = "chsh";
            f.inputs_per_party = {2, 2};
            f.outcomes_per_party = {2, 2};
            f.allocate();
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            const int sign = ((a == b) ? 1 : -1) * ((x == 1 && y == 1) ? -1 : 1);
                            std::vector<int> xs{x, y}, as{a, b};
                            f.c(xs, as) = sign * 0.25;
                        }
            f.classical_bound = 0.5;
            f.quantum_bound = {std::sqrt(2.0) / 2.0, dim, "Tsirelson"};
        }
        const auto ev = spectral_evidence(f, m);
        const auto r = certify(corr, f, ev);

        const double lmax = 1.0;  // pure state
        REQUIRE(r.a1.value <= lmax + 1e-8);
        const double overlap = oracles::product_overlap_oracle(rho.entries, dim, 16,
                                                               55 + static_cast<std::uint64_t>(trial));
        REQUIRE(r.fhat.value >= std::sqrt(overlap) - 1e-8);
        REQUIRE(r.gme.value <= 1.0 - overlap + 1e-8);
        const auto red = partial_trace(rho, {0});
        const double sa = oracles::von_neumann_entropy_bits(red.entries);
        REQUIRE(r.ic.value <= sa + 1e-8);
    }
}
