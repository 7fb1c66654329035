#include <doctest.h>

#include <cmath>
#include <vector>

#include "qnoise/error.hpp"
#include "qnoise/noisegen.hpp"

using namespace qnoise;

TEST_CASE("OU exact update") {
    const double tau = 2.0, c = 3.0, dt = 0.1;
    CHECK(ou_step(1.5, dt, tau, c, 0.0) == doctest::Approx(1.5 * std::exp(-dt / tau)));
    CHECK(ou_step(0.0, dt, tau, c, 1.0) ==
          doctest::Approx(std::sqrt(0.5 * c * tau * (1 - std::exp(-2 * dt / tau)))));
}

TEST_CASE("OU source is stationary with the right autocovariance") {
    const double tau = 1.0, c = 2.0, dt = 0.05;
    const OuNoise src(c, tau);
    std::vector<double> eta(400);
    double v0 = 0.0, vend = 0.0, lag = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        Rng rng = make_stream(17, k);
        src.fill(eta, dt, rng);
        v0 += eta[0] * eta[0];
        vend += eta.back() * eta.back();
        lag += eta[100] * eta[120];
    }
    const double C0 = 0.5 * c * tau;
    // standard error of a variance estimate is ~ sqrt(2/n) relative
    CHECK(std::abs(v0 / n / C0 - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(vend / n / C0 - 1.0) < 5 * std::sqrt(2.0 / n));
    CHECK(std::abs(lag / n - C0 * std::exp(-20 * dt / tau)) < 5 * C0 * std::sqrt(2.0 / n));
}

TEST_CASE("Franklin generator reproduces the covariance") {
    const auto C = ou_covariance(50, 0.1, 2.0, 0.7);
    const FranklinGenerator gen(C);
    CHECK((gen.factor() * gen.factor().transpose() - C).norm() < 1e-10 * C.norm());
    // deterministic mapping of the normal draws
    std::vector<double> u(50, 0.0), out(50);
    u[0] = 1.0;
    gen.generate(u, out);
    for (int i = 0; i < 50; ++i) CHECK(out[i] == doctest::Approx(gen.factor()(i, 0)));
}

TEST_CASE("Franklin rejects invalid covariances") {
    Covariance C(2, 2);
    C << 1.0, 2.0, 2.0, 1.0;  // eigenvalue -1
    try {
        FranklinGenerator g(C);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotPositiveSemidefinite);
    }
    C << 1.0, 0.5, 0.1, 1.0;
    CHECK_THROWS_AS(FranklinGenerator{C}, Error);
    // rank-deficient but PSD matrix passes with jitter
    C << 1.0, 1.0, 1.0, 1.0;
    CHECK_NOTHROW(FranklinGenerator{C});
}

TEST_CASE("Percival trajectories have the spectrum's variance") {
    const double tau = 1.0, c = 2.0;
    const auto psd = NoisePsd::ou(c, tau);
    const PercivalNoise src(psd);
    std::vector<double> eta(256);
    const double dt = 0.05;
    double var = 0.0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) {
        Rng rng = make_stream(23, k);
        src.fill(eta, dt, rng);
        for (double v : eta) var += v * v;
    }
    var /= n * 256.0;
    // discrete spectrum up to Nyquist captures all but ~1% of the power
    CHECK(var == doctest::Approx(0.5 * c * tau).epsilon(0.05));
    CHECK(percival_draw_count(8) == 10);
    std::vector<double> d(10, 0.0);
    CHECK_THROWS_AS(percival_trajectory(psd, 5, 0.0, 1.0, d), Error);
    CHECK_THROWS_AS(percival_trajectory(psd, 8, 0.0, 1.0, std::span<const double>(d.data(), 9)), Error);
}

TEST_CASE("noise sources are deterministic per stream") {
    const auto psd = NoisePsd::ou(1.0, 1.0);
    const auto src = make_noise_source(psd);
    std::vector<double> a(64), b(64), c(64);
    Rng r1 = make_stream(1, 5), r2 = make_stream(1, 5), r3 = make_stream(1, 6);
    src->fill(a, 0.1, r1);
    src->fill(b, 0.1, r2);
    src->fill(c, 0.1, r3);
    CHECK(a == b);
    CHECK(a != c);
    const auto zero = make_noise_source(NoisePsd::zero());
    zero->fill(a, 0.1, r1);
    for (double v : a) CHECK(v == 0.0);
}
