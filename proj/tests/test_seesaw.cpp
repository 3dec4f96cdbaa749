#include <catch2/catch_amalgamated.hpp>

#include "entcert/catalog.hpp"
#include "entcert/seesaw.hpp"
#include "entcert/states.hpp"

using namespace entcert;

TEST_CASE("see-saw reproduces the CGLMP quantum bound", "[seesaw]") {
    const auto f = cglmp3();
    SeesawOptions opts;
    opts.restarts = 12;
    opts.seed = 42;
    const auto res = seesaw_max(f, DimVector{3, 3}, opts);
    REQUIRE(res.value == Catch::Approx(f.quantum_bound.value).margin(1e-6));
}

TEST_CASE("canonical CGLMP settings hit the documented values", "[seesaw]") {
    const auto f = cglmp3();
    const auto spec = canonical_settings("cglmp3");
    MeasurementSet m = spec.realize();
    for (auto& party : m.ops) party.resize(2);  // drop the computational input
    REQUIRE_NOTHROW(m.validate());

    const Mat B = bell_operator(f, m);
    const auto mes = make_phi_beta(1.0);
    const double I_mes = (mes.amplitudes.adjoint() * B * mes.amplitudes)(0).real();
    REQUIRE(I_mes == Catch::Approx(2.8729).margin(1e-3));

    const double beta_star = (std::sqrt(11.0) - std::sqrt(3.0)) / 2.0;
    const auto opt = make_phi_beta(beta_star);
    const double I_star = (opt.amplitudes.adjoint() * B * opt.amplitudes)(0).real();
    REQUIRE(I_star == Catch::Approx(f.quantum_bound.value).margin(1e-9));

    // the canonical settings attain the quantum bound as the top eigenvalue
    const auto g = spectral_gap(f, m);
    REQUIRE(g.lambda1 == Catch::Approx(f.quantum_bound.value).margin(1e-9));
    REQUIRE(g.lambda2 == Catch::Approx(2.0 / std::sqrt(3.0)).margin(1e-9));
}

TEST_CASE("see-saw reproduces the MABK quantum bound", "[seesaw]") {
    SeesawOptions opts;
    opts.restarts = 8;
    opts.seed = 3;
    const auto res = seesaw_max(mabk3(), DimVector{2, 2, 2}, opts);
    REQUIRE(res.value == Catch::Approx(2.0).margin(1e-7));
}

TEST_CASE("tailored functional loads, validates and is maximized by the MES", "[seesaw]") {
    const auto f = tailored3();  // load-time validation: brute force + see-saw
    REQUIRE(f.classical_bound == Catch::Approx(4.156505404836612).margin(1e-9));
    REQUIRE(f.quantum_bound.value == Catch::Approx(12.0 / std::sqrt(5.0)).margin(1e-12));

    // global see-saw does not exceed the declared bound and reaches it
    SeesawOptions opts;
    opts.restarts = 10;
    opts.seed = 11;
    const auto res = seesaw_max(f, DimVector{3, 3}, opts);
    REQUIRE(res.value <= f.quantum_bound.value + 1e-7);
    REQUIRE(res.value == Catch::Approx(f.quantum_bound.value).margin(1e-5));

    // the optimizer's state is the maximally entangled one: check Schmidt
    // coefficients via the singular values of the 3x3 amplitude matrix
    Mat amp(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) amp(i, j) = res.state.amplitudes(3 * i + j);
    Eigen::JacobiSVD<Mat> svd(amp);
    for (int k = 0; k < 3; ++k)
        REQUIRE(svd.singularValues()(k) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-4));

    SECTION("fixed-state see-saw on the MES reaches the same value") {
        const auto mes = make_phi_beta(1.0);
        SeesawOptions o;
        o.restarts = 8;
        o.seed = 5;
        const auto r2 = seesaw_max(f, DimVector{3, 3}, o, &mes);
        REQUIRE(r2.value == Catch::Approx(f.quantum_bound.value).margin(1e-6));
    }
}

TEST_CASE("tailored canonical settings make the MES the exact top eigenvector", "[seesaw]") {
    const auto f = tailored3();
    MeasurementSet m = canonical_settings("tailored3").realize();
    for (auto& party : m.ops) party.resize(2);
    const Mat B = bell_operator(f, m);
    const auto mes = make_phi_beta(1.0);
    const Vec Bv = B * mes.amplitudes;
    const double lam = 12.0 / std::sqrt(5.0);
    REQUIRE((Bv - lam * mes.amplitudes).cwiseAbs().maxCoeff() < 1e-9);
    const auto g = spectral_gap(f, m);
    REQUIRE(g.lambda1 == Catch::Approx(lam).margin(1e-9));
    REQUIRE(g.lambda2 == Catch::Approx(lam / 2.0).margin(1e-9));
}
