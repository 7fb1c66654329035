#include <doctest.h>

#include "qnoise/errormap.hpp"
#include "qnoise/quantum.hpp"
#include "qnoise/rng.hpp"

using namespace qnoise;

namespace {

Mat4 random_chi(Rng& rng) {
    // random CPTP map from 3 random Kraus-like matrices, then converted
    Eigen::Matrix<cplx, 8, 2> V;
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 2; ++j) V(i, j) = cplx(unit_normal(rng), unit_normal(rng));
    Eigen::HouseholderQR<Eigen::Matrix<cplx, 8, 2>> qr(V);
    const Eigen::Matrix<cplx, 8, 2> Q = qr.householderQ() * Eigen::Matrix<cplx, 8, 2>::Identity();
    KrausSet k;
    for (int i = 0; i < 4; ++i) k.ops.push_back(Q.block<2, 2>(2 * i, 0));
    return superop_to_chi(kraus_to_superop(k));
}

}  // namespace

TEST_CASE("Pauli algebra") {
    for (int k = 1; k < 4; ++k) {
        CHECK((pauli(k) * pauli(k) - Mat2::Identity()).norm() < 1e-15);
        CHECK(std::abs(pauli(k).trace()) < 1e-15);
    }
    CHECK((pauli(1) * pauli(2) - I_unit * pauli(3)).norm() < 1e-15);
}

TEST_CASE("chi, superoperator and PTM conversions round-trip") {
    Rng rng = make_stream(3, 0);
    for (int n = 0; n < 20; ++n) {
        const Mat4 chi = random_chi(rng);
        CHECK(std::abs(chi.trace() - 1.0) < 1e-12);
        CHECK(tp_defect(chi) < 1e-12);
        CHECK(min_eigenvalue(chi) > -1e-12);
        const Mat4 S = chi_to_superop(chi);
        CHECK((superop_to_chi(S) - chi).norm() < 1e-12);
        CHECK((ptm_to_superop(superop_to_ptm(S)) - S).norm() < 1e-12);
        const Mat2 rho = ket_proj(haar_state(rng));
        CHECK((apply_chi(chi, rho) - apply_chi(superop_to_chi(S), rho)).norm() < 1e-12);
    }
}

TEST_CASE("average gate fidelity of standard channels") {
    CHECK(avg_gate_fidelity(unitary_superop(rx(0.3)), rx(0.3)) == doctest::Approx(1.0).epsilon(1e-14));
    const double p = 0.12;
    CHECK(error_channel_fidelity(depolarizing_channel(p)) == doctest::Approx(1.0 - 2.0 * p / 3.0).epsilon(1e-14));
    // chi_error_part undoes chi_after_unitary
    Rng rng = make_stream(5, 0);
    const Mat4 chi = random_chi(rng);
    const Mat2 U = drive_unitary(1.0, 0.4, 1.3);
    CHECK((chi_error_part(chi_after_unitary(chi, U), U) - chi).norm() < 1e-12);
}

TEST_CASE("state fidelity") {
    const Mat2 a = ket_proj(Vec2(1, 0));
    CHECK(state_fidelity(a, a) == doctest::Approx(1.0));
    CHECK(state_fidelity(a, Mat2::Identity() / 2.0) == doctest::Approx(0.5));
    CHECK(state_fidelity(a, ket_proj(Vec2(0, 1))) == doctest::Approx(0.0));
    const Eigen::Vector3d r(0.1, -0.2, 0.3);
    CHECK((bloch(from_bloch(r)) - r).norm() < 1e-15);
}
