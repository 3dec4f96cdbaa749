#include <catch2/catch_amalgamated.hpp>

#include "entcert/catalog.hpp"
#include "entcert/correlation.hpp"
#include "entcert/purity.hpp"
#include "oracles.hpp"

using namespace entcert;

namespace {
NondegeneracyProfile mabk_profile() {
    NondegeneracyProfile p;
    p.functional = "mabk3";
    p.dims = DimVector{2, 2, 2};
    p.c_q = 2.0;
    p.rows = {{2.0, 2.0, "spectral structure at X/Y settings", false}};
    return p;
}
}  // namespace

TEST_CASE("a1 from profile rows") {
    const auto prof = mabk_profile();
    SECTION("maximal violation certifies a1 = 1") {
        const auto c = a1_from_profile(2.0, prof);
        REQUIRE(c.has_value());
        REQUIRE(c->a1 == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("paper endpoint: I = 1.895 gives a1 = 0.9475") {
        const auto c = a1_from_profile(1.895, prof);
        REQUIRE(c.has_value());
        REQUIRE(c->a1 == Catch::Approx(0.9475).margin(1e-12));
        REQUIRE(c->mode == PurityMode::profile);
    }
    SECTION("no applicable row gives no certificate") {
        NondegeneracyProfile p = prof;
        p.rows = {{0.05, 1.9, "narrow row", false}};
        REQUIRE_FALSE(a1_from_profile(1.0, p).has_value());  // eps1_obs = 1 > 0.05
    }
    SECTION("observed eps1 at or beyond every row's eps2 certifies nothing") {
        NondegeneracyProfile p = prof;
        p.rows = {{2.0, 0.08, "tiny eps2", false}};
        REQUIRE_FALSE(a1_from_profile(1.5, p).has_value());  // 1 - 0.5/0.08 < 0
    }
    SECTION("inconsistent data is a hard error") {
        REQUIRE_THROWS_AS(a1_from_profile(2.5, prof), error);
    }
}

TEST_CASE("a1 from spectral gap") {
    const SpectralGap gap{2.0, 0.0};
    SECTION("I = lambda1 gives 1") {
        REQUIRE(a1_from_spectrum(2.0, gap).a1 == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("GHZ/MABK endpoint 1.895 gives 0.9475") {
        REQUIRE(a1_from_spectrum(1.895, gap).a1 == Catch::Approx(0.9475).margin(1e-12));
    }
    SECTION("I = lambda2 gives the vacuous a1 = 0 certificate") {
        const auto c = a1_from_spectrum(0.0, gap);
        REQUIRE(c.a1 == 0.0);
        REQUIRE(c.vacuous);
    }
    SECTION("I below lambda2 clamps to the vacuous certificate") {
        REQUIRE(a1_from_spectrum(-0.4, gap).a1 == 0.0);
    }
    SECTION("degenerate gap is an error") {
        REQUIRE_THROWS_AS(a1_from_spectrum(1.0, SpectralGap{1.0, 1.0}), error);
    }
    SECTION("I above lambda1 + slack is inconsistent") {
        REQUIRE_THROWS_AS(a1_from_spectrum(2.1, gap), error);
    }
}

TEST_CASE("spectral certificates are sound and monotone (property)") {
    Rng rng(2025);
    const auto f = mabk3();
    const auto m = ghz_xy_settings().realize();
    const auto gap = spectral_gap(f, m);
    double prev_a1 = -1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto rho = oracles::random_density(DimVector{2, 2, 2}, rng, 2);
        const double I = (bell_operator(f, m) * rho.entries).trace().real();
        if (I > gap.lambda1) continue;
        const auto cert = a1_from_spectrum(I, gap);
        const double lam_max = eig_hermitian(rho.entries).values[0];
        REQUIRE(cert.a1 <= lam_max + 1e-8);
        (void)prev_a1;
    }
    SECTION("monotone in the observed value") {
        double last = -1.0;
        for (double I = 0.0; I <= 2.0; I += 0.1) {
            const double a1 = a1_from_spectrum(I, gap).a1;
            REQUIRE(a1 >= last - 1e-12);
            last = a1;
        }
    }
}

TEST_CASE("profile mode never exceeds spectral mode on the same data") {
    // profile row derived from the spectral gap gives exactly the spectral
    // bound; any conservative row gives less
    const SpectralGap gap{2.0, 0.0};
    const auto prof = mabk_profile();
    for (double I = 1.0; I <= 2.0; I += 0.05) {
        const auto pc = a1_from_profile(I, prof);
        const auto sc = a1_from_spectrum(I, gap);
        REQUIRE(pc.has_value());
        REQUIRE(pc->a1 <= sc.a1 + 1e-12);
    }
}

TEST_CASE("profile_search estimates non-degeneracy rows", "[profile_search]") {
    SECTION("MABK at eps1 = 0 recovers eps2 close to 2") {
        ProfileSearchOptions opts;
        opts.restarts = 50;
        opts.iters_per_restart = 300;
        opts.seed = 99;
        const auto prof = profile_search(mabk3(), DimVector{2, 2, 2}, {0.0}, opts);
        REQUIRE(prof.rows.size() == 1);
        // raw value 2 shrunk by the 0.99 safety factor, minus optimizer slack
        REQUIRE(prof.rows[0].eps2 > 1.85);
        REQUIRE(prof.rows[0].eps2 <= 2.0);
    }
    SECTION("grid point beyond C_q - C_l produces no row") {
        ProfileSearchOptions opts;
        opts.restarts = 30;
        opts.iters_per_restart = 250;
        const auto prof = profile_search(mabk3(), DimVector{2, 2, 2}, {1.2}, opts);
        REQUIRE(prof.rows.empty());
    }
    SECTION("CGLMP at eps1 = 0 approaches the canonical spectral gap") {
        ProfileSearchOptions opts;
        opts.restarts = 40;
        opts.iters_per_restart = 350;
        opts.seed = 12;
        const auto prof = profile_search(cglmp3(), DimVector{3, 3}, {0.0}, opts);
        REQUIRE(prof.rows.size() == 1);
        const double gap = cglmp3().quantum_bound.value - 2.0 / std::sqrt(3.0);
        REQUIRE(prof.rows[0].eps2 <= gap + 1e-6);
        REQUIRE(prof.rows[0].eps2 > 0.9 * gap);
    }
}

TEST_CASE("profile validation") {
    NondegeneracyProfile p;
    p.functional = "x";
    p.dims = DimVector{2, 2};
    p.c_q = 2.0;
    p.rows = {{0.5, 0.4, "", false}};  // eps2 < eps1
    REQUIRE_THROWS_AS(p.validate(), error);
    p.rows = {{0.5, 2.5, "", false}};  // eps2 > C_q
    REQUIRE_THROWS_AS(p.validate(), error);
    p.rows = {{0.4, 1.0, "", false}, {0.2, 1.5, "", false}};  // unsorted
    REQUIRE_THROWS_AS(p.validate(), error);
}
