#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qnoise/error.hpp"
#include "qnoise/psd.hpp"

using namespace qnoise;

namespace {

std::string tmp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("qnoise_test_" + name)).string();
}

}  // namespace

TEST_CASE("OU spectrum and autocovariance") {
    const double c = 2.0e8, tau = 5e-4;
    const auto psd = NoisePsd::ou(c, tau);
    CHECK(psd(0.0) == doctest::Approx(c * tau * tau));
    CHECK(psd(1.0 / tau) == doctest::Approx(0.5 * c * tau * tau));
    CHECK(psd(-3.0) == psd(3.0));
    CHECK(psd.autocov(0.0) == doctest::Approx(0.5 * c * tau));
    CHECK(psd.autocov(tau) == doctest::Approx(0.5 * c * tau * std::exp(-1.0)));
    CHECK(NoisePsd::zero().is_zero());
    CHECK_THROWS_AS(NoisePsd::ou(1.0, 0.0), Error);
}

TEST_CASE("tabulated PSD interpolation and plateaus") {
    const auto psd = NoisePsd::tabulated({1.0, 10.0, 100.0}, {4.0, 2.0, 1.0}, 5.0, 0.5);
    CHECK(psd(10.0) == doctest::Approx(2.0));
    CHECK(psd(0.5) == 5.0);
    CHECK(psd(1000.0) == 0.5);
    // power law between nodes
    CHECK(psd(std::sqrt(10.0)) == doctest::Approx(std::sqrt(8.0)));
    CHECK_THROWS_AS(NoisePsd::tabulated({1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0), Error);
}

TEST_CASE("excluded band is bridged continuously") {
    std::vector<double> w, s;
    for (int i = 1; i <= 100; ++i) {
        w.push_back(i * 10.0);
        const double bump = (i > 40 && i < 60) ? 50.0 : 1.0;
        s.push_back(bump * 1000.0 / (i * 10.0));
    }
    const auto psd = NoisePsd::tabulated(w, s, s.front(), s.back(), {{395.0, 605.0}});
    for (double e : {395.0, 605.0}) {
        const double r = psd(e * (1 + 1e-9)) / psd(e * (1 - 1e-9));
        CHECK(std::abs(r - 1.0) < 0.01);
    }
    // no bump survives inside the band
    CHECK(psd(500.0) < 3.0);
}

TEST_CASE("PSD file ingestion converts Hz one-sided to rad two-sided") {
    const std::string csv = tmp_path("psd.csv"), side = tmp_path("psd.json");
    {
        std::ofstream f(csv);
        f << "freq_hz,psd_one_sided\n1,8\n10,4\n100,2\n";
        std::ofstream j(side);
        j << R"({"units": "hz_one_sided", "high_plateau": 2.0})";
    }
    const auto file = read_psd_csv(csv, side);
    const auto psd = psd_from_file(file);
    const double two_pi = 2 * M_PI;
    CHECK(psd(two_pi * 10.0) == doctest::Approx(4.0 / (2 * two_pi)).epsilon(1e-14));
    // total power: trapezoid over the nodes is preserved by the linear change of variables
    double p1 = 0.0, p2 = 0.0;
    for (std::size_t i = 1; i < file.freq.size(); ++i) {
        p1 += 0.5 * (file.value[i] + file.value[i - 1]) * (file.freq[i] - file.freq[i - 1]);
        p2 += 0.5 * (psd.density()[i] + psd.density()[i - 1]) * (psd.omega()[i] - psd.omega()[i - 1]);
    }
    CHECK(std::abs(2.0 * p2 - p1) < 1e-9 * p1);

    // the written normalized file reads back to the same spectrum
    const std::string csv2 = tmp_path("psd_norm.csv"), side2 = tmp_path("psd_norm.json");
    write_normalized_psd(psd, csv2, side2);
    const auto psd2 = psd_from_file(read_psd_csv(csv2, side2));
    for (double w : {1.0, 30.0, 100.0, 600.0, 1e4}) CHECK(psd2(w) == doctest::Approx(psd(w)).epsilon(1e-12));
}

TEST_CASE("PSD ingestion rejects bad input") {
    const std::string csv = tmp_path("bad.csv"), side = tmp_path("bad.json");
    {
        std::ofstream f(csv);
        f << "freq_hz,psd_one_sided\n1,8\n10,4\n5,2\n";
    }
    try {
        read_psd_csv(csv);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidInput);
        CHECK(std::string(e.what()).find("row 4") != std::string::npos);
    }
    {
        std::ofstream f(csv);
        f << "1,8\n10,4\n";
    }
    CHECK_THROWS_AS(psd_from_file(read_psd_csv(csv)), Error);  // no high plateau
}
