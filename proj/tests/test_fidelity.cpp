#include <catch2/catch_amalgamated.hpp>

#include "entcert/correlation.hpp"
#include "entcert/fidelity.hpp"
#include "entcert/measurements.hpp"
#include "entcert/states.hpp"
#include "oracles.hpp"

using namespace entcert;

namespace {
SettingTensor tensor_from(const std::vector<int>& dims, const std::vector<double>& entries) {
    SettingTensor t;
    t.dims = dims;
    t.entries = entries;
    return t;
}
}  // namespace

TEST_CASE("bipartite setting bound") {
    SECTION("perfect qutrit correlation gives 1/sqrt(3)") {
        std::vector<double> p(9, 0.0);
        p[0] = p[4] = p[8] = 1.0 / 3.0;
        std::vector<double> sq;
        for (double v : p) sq.push_back(std::sqrt(v));
        REQUIRE(setting_bound_bipartite(tensor_from({3, 3}, sq)) ==
                Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-12));
    }
    SECTION("product distributions give 1") {
        Rng rng(5);
        std::vector<double> u{0.2, 0.5, 0.3}, v{0.6, 0.1, 0.3};
        std::vector<double> sq;
        for (double a : u)
            for (double b : v) sq.push_back(std::sqrt(a * b));
        REQUIRE(setting_bound_bipartite(tensor_from({3, 3}, sq)) ==
                Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("uniform 1/9 is product, bound 1") {
        std::vector<double> sq(9, std::sqrt(1.0 / 9.0));
        REQUIRE(setting_bound_bipartite(tensor_from({3, 3}, sq)) ==
                Catch::Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("SHOPM setting bound") {
    SECTION("GHZ parity tensor gives 1/sqrt(2)") {
        // entries 1/2 on the four positions with an even number of zeros
        std::vector<double> e(8, 0.0);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    const int zeros = (a == 0) + (b == 0) + (c == 0);
                    if (zeros % 2 == 0) e[static_cast<std::size_t>(4 * a + 2 * b + c)] = 0.5;
                }
        const auto b = setting_bound_shopm(tensor_from({2, 2, 2}, e));
        REQUIRE(b.converged);
        REQUIRE(b.value == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-9));
    }
    SECTION("uniform tensor is product, bound 1") {
        std::vector<double> e(8, std::sqrt(1.0 / 8.0));
        const auto b = setting_bound_shopm(tensor_from({2, 2, 2}, e));
        REQUIRE(b.value == Catch::Approx(1.0).margin(1e-9));
    }
    SECTION("rank-1 tensor returns its norm") {
        std::vector<double> u{0.8, 0.6}, v{0.6, 0.8}, w{1.0, 0.0};
        std::vector<double> e;
        for (double a : u)
            for (double b2 : v)
                for (double c : w) e.push_back(0.9 * a * b2 * c);
        const auto b = setting_bound_shopm(tensor_from({2, 2, 2}, e));
        REQUIRE(b.value == Catch::Approx(0.9).margin(1e-9));
    }
    SECTION("order-2 padded with a trivial axis matches the singular value") {
        Rng rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> p(9);
            double sum = 0.0;
            for (auto& v : p) {
                v = rng.uniform();
                sum += v;
            }
            std::vector<double> sq;
            for (double v : p) sq.push_back(std::sqrt(v / sum));
            const double exact = setting_bound_bipartite(tensor_from({3, 3}, sq));
            const auto padded = setting_bound_shopm(tensor_from({3, 3, 1}, sq));
            REQUIRE(padded.value == Catch::Approx(exact).margin(1e-8));
        }
    }
    SECTION("non-convergence is flagged but a value is returned") {
        std::vector<double> e(8, std::sqrt(1.0 / 8.0));
        ShopmOptions o;
        o.max_iters = 1;
        o.restarts = 2;
        const auto b = setting_bound_shopm(tensor_from({2, 2, 2}, e), o);
        REQUIRE_FALSE(b.converged);
        REQUIRE(b.value > 0.0);
    }
}

TEST_CASE("fhat over correlations") {
    SECTION("ideal MES with a computational-basis setting included gives 1/sqrt(3)") {
        MeasurementSet m;
        m.dim = DimVector{3, 3};
        m.ops = {{cglmp_projectors(0, 0), computational_basis(3)},
                 {cglmp_projectors(0.3, 0.9), computational_basis(3)}};
        const auto c = correlation_from_state(make_phi_beta(1.0), m);
        const auto fb = fhat(c);
        REQUIRE(fb.value <= 1.0 / std::sqrt(3.0) + 1e-9);
        // the argmin comes from the perfectly correlated setting
        REQUIRE(fb.per_setting.size() == 4);
    }
    SECTION("GHZ with all 8 X/Y settings gives 1/sqrt(2)") {
        const auto c = correlation_from_state(DensityMatrix::from_pure(make_ghz3()),
                                              ghz_xy_settings().realize());
        const auto fb = fhat(c);
        REQUIRE(fb.value == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-7));
        // zero-correlator settings contribute 1
        double maxv = 0.0;
        for (double v : fb.per_setting) maxv = std::max(maxv, v);
        REQUIRE(maxv == Catch::Approx(1.0).margin(1e-7));
    }
    SECTION("a correlation with only product settings certifies nothing") {
        Correlation c(DimVector{2, 2}, {1, 1}, {2, 2});
        for (auto& v : c.table) v = 0.25;
        const auto fb = fhat(c);
        REQUIRE(fb.value == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("adding a setting never increases fhat (monotonicity)") {
        Rng rng(77);
        for (int trial = 0; trial < 5; ++trial) {
            const auto rho = oracles::random_density(DimVector{3, 3}, rng);
            auto m_small = oracles::random_projective(DimVector{3, 3}, {1, 1}, rng);
            auto m_big = m_small;
            const auto extra = oracles::random_projective(DimVector{3, 3}, {1, 1}, rng);
            m_big.ops[0].push_back(extra.ops[0][0]);
            m_big.ops[1].push_back(extra.ops[1][0]);
            const double f_small = fhat(correlation_from_state(rho, m_small)).value;
            const double f_big = fhat(correlation_from_state(rho, m_big)).value;
            REQUIRE(f_big <= f_small + 1e-10);
        }
    }
}

TEST_CASE("fhat soundness against the product-overlap oracle (property)") {
    Rng rng(117);
    int shopm_cases = 0;
    for (int trial = 0; trial < 100; ++trial) {
        DimVector dim =
            (trial % 5 == 0) ? DimVector{2, 2, 2} : ((trial % 2 == 0) ? DimVector{2, 2} : DimVector{3, 3});
        if (dim.parties() == 3) ++shopm_cases;
        const auto rho = (trial % 3 == 0)
                             ? DensityMatrix::from_pure(oracles::random_pure_state(dim, rng))
                             : oracles::random_density(dim, rng, 2);
        const auto m = oracles::random_projective(dim, std::vector<int>(
                                                           static_cast<std::size_t>(dim.parties()), 2),
                                                  rng);
        const auto c = correlation_from_state(rho, m);
        ShopmOptions so;
        so.restarts = 8;
        const double fh = fhat(c, so).value;
        const double overlap = oracles::product_overlap_oracle(rho.entries, dim, 12,
                                                               1000 + static_cast<std::uint64_t>(trial));
        REQUIRE(fh >= std::sqrt(overlap) - 1e-8);
    }
    REQUIRE(shopm_cases >= 10);
}
