#include "qnoise/quantum.hpp"

#include <algorithm>
#include <cmath>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

std::array<Mat2, 4> make_paulis() {
    std::array<Mat2, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -I_unit, I_unit, 0;
    p[3] << 1, 0, 0, -1;
    return p;
}

// column-stacking vec: vec(A X B) = (B^T kron A) vec(X)
Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

Eigen::Vector4cd vec(const Mat2& m) {
    Eigen::Vector4cd v;
    v << m(0, 0), m(1, 0), m(0, 1), m(1, 1);
    return v;
}

Mat2 unvec(const Eigen::Vector4cd& v) {
    Mat2 m;
    m << v(0), v(2), v(1), v(3);
    return m;
}

}  // namespace

const Mat2& pauli(int k) {
    static const std::array<Mat2, 4> p = make_paulis();
    return p[static_cast<std::size_t>(k)];
}

Mat2 ket_proj(const Vec2& psi) { return psi * psi.adjoint(); }

Mat2 rx(double angle) {
    Mat2 u;
    const double c = std::cos(angle / 2), s = std::sin(angle / 2);
    u << c, -I_unit * s, -I_unit * s, c;
    return u;
}

Mat2 drive_unitary(double Omega, double phi, double t) {
    const double a = Omega * t / 2;
    const Mat2 sphi = std::cos(phi) * pauli(1) + std::sin(phi) * pauli(2);
    return std::cos(a) * Mat2::Identity() - I_unit * std::sin(a) * sphi;
}

Mat2 apply_chi(const Mat4& chi, const Mat2& rho) {
    Mat2 out = Mat2::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (chi(a, b) != cplx(0.0)) out += chi(a, b) * pauli(a) * rho * pauli(b);
    return out;
}

Mat2 apply_kraus(const KrausSet& k, const Mat2& rho) {
    Mat2 out = Mat2::Zero();
    for (const auto& op : k.ops) out += op * rho * op.adjoint();
    return out;
}

Mat4 chi_to_superop(const Mat4& chi) {
    Mat4 s = Mat4::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += chi(a, b) * kron(pauli(b).conjugate(), pauli(a));
    return s;
}

Mat4 superop_to_chi(const Mat4& S) {
    Mat4 chi;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Mat4 B = kron(pauli(b).conjugate(), pauli(a));
            chi(a, b) = (B.adjoint() * S).trace() / 4.0;
        }
    return chi;
}

Mat4 kraus_to_superop(const KrausSet& k) {
    Mat4 s = Mat4::Zero();
    for (const auto& op : k.ops) s += kron(op.conjugate(), op);
    return s;
}

Mat4 unitary_superop(const Mat2& U) { return kron(U.conjugate(), U); }

RMat4 superop_to_ptm(const Mat4& S) {
    RMat4 r;
    for (int j = 0; j < 4; ++j) {
        const Mat2 out = unvec(S * vec(pauli(j)));
        for (int i = 0; i < 4; ++i) r(i, j) = 0.5 * (pauli(i) * out).trace().real();
    }
    return r;
}

Mat4 ptm_to_superop(const RMat4& R) {
    Mat4 s = Mat4::Zero();
    // E(rho) = sum_ij R_ij s_i tr(s_j rho)/2
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (R(i, j) != 0.0) s += 0.5 * R(i, j) * vec(pauli(i)) * vec(pauli(j).adjoint()).adjoint();
    return s;
}

Mat4 chi_after_unitary(const Mat4& chi_err, const Mat2& U) {
    return superop_to_chi(chi_to_superop(chi_err) * unitary_superop(U));
}

Mat4 chi_error_part(const Mat4& chi_full, const Mat2& U) {
    return superop_to_chi(chi_to_superop(chi_full) * unitary_superop(U.adjoint()));
}

double avg_gate_fidelity(const Mat4& S, const Mat2& target) {
    const double fpro = ((unitary_superop(target).adjoint() * S).trace() / 4.0).real();
    return (2.0 * fpro + 1.0) / 3.0;
}

double avg_gate_fidelity(const ProcessMatrix& chi, const Mat2& target) {
    return avg_gate_fidelity(chi_to_superop(chi.chi), target);
}

double avg_gate_fidelity(const KrausSet& k, const Mat2& target) {
    return avg_gate_fidelity(kraus_to_superop(k), target);
}

Eigen::Vector3d bloch(const Mat2& rho) {
    return {(pauli(1) * rho).trace().real(), (pauli(2) * rho).trace().real(),
            (pauli(3) * rho).trace().real()};
}

Mat2 from_bloch(const Eigen::Vector3d& r) {
    return 0.5 * (Mat2::Identity() + r(0) * pauli(1) + r(1) * pauli(2) + r(2) * pauli(3));
}

double state_fidelity(const Mat2& a, const Mat2& b) {
    // qubit closed form: tr(ab) + 2 sqrt(det a det b)
    const double da = std::max(0.0, a.determinant().real());
    const double db = std::max(0.0, b.determinant().real());
    const double f = (a * b).trace().real() + 2.0 * std::sqrt(da * db);
    return std::clamp(f, 0.0, 1.0);
}

double min_eigenvalue(const Mat2& h) {
    Eigen::SelfAdjointEigenSolver<Mat2> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double min_eigenvalue(const Mat4& h) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double hermiticity_defect(const Mat4& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

double tp_defect(const Mat4& chi) {
    Mat2 acc = Mat2::Zero();
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) acc += chi(a, b) * pauli(b) * pauli(a);
    return (acc - Mat2::Identity()).cwiseAbs().maxCoeff();
}

double completeness_defect(const KrausSet& k) {
    Mat2 acc = Mat2::Zero();
    for (const auto& op : k.ops) acc += op.adjoint() * op;
    return (acc - Mat2::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace qnoise
