#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <vector>

namespace qnoise {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using Mat4 = Eigen::Matrix4cd;
using RMat4 = Eigen::Matrix4d;
using DensityMatrix = Mat2;

inline constexpr cplx I_unit{0.0, 1.0};

// sigma_0..3 = I, x, y, z
const Mat2& pauli(int k);

// Process matrix over the unnormalized Pauli basis {I, sx, sy, sz}; trace = 1 for TP maps.
struct ProcessMatrix {
    Mat4 chi = Mat4::Zero();
    double t = 0.0;
};

struct KrausSet {
    std::vector<Mat2> ops;
    double t = 0.0;
};

Mat2 ket_proj(const Vec2& psi);
Mat2 rx(double angle);  // exp(-i angle sx / 2)
Mat2 drive_unitary(double Omega, double phi, double t);

Mat2 apply_chi(const Mat4& chi, const Mat2& rho);
Mat2 apply_kraus(const KrausSet& k, const Mat2& rho);

// vec is column stacking; S vec(rho) = vec(E(rho))
Mat4 chi_to_superop(const Mat4& chi);
Mat4 superop_to_chi(const Mat4& S);
Mat4 kraus_to_superop(const KrausSet& k);
Mat4 unitary_superop(const Mat2& U);
// Pauli transfer matrix R_ij = tr(s_i E(s_j)) / 2
RMat4 superop_to_ptm(const Mat4& S);
Mat4 ptm_to_superop(const RMat4& R);

// chi of rho -> E(U rho U^dag) given chi of E
Mat4 chi_after_unitary(const Mat4& chi_err, const Mat2& U);
// chi of E given the full-process chi and the ideal U
Mat4 chi_error_part(const Mat4& chi_full, const Mat2& U);

// average gate fidelity of a channel (as superoperator) against a target unitary
double avg_gate_fidelity(const Mat4& S, const Mat2& target);
double avg_gate_fidelity(const ProcessMatrix& chi, const Mat2& target);
double avg_gate_fidelity(const KrausSet& k, const Mat2& target);

Eigen::Vector3d bloch(const Mat2& rho);
Mat2 from_bloch(const Eigen::Vector3d& r);

// Uhlmann fidelity (tr sqrt(sqrt a b sqrt a))^2
double state_fidelity(const Mat2& a, const Mat2& b);

double min_eigenvalue(const Mat2& h);
double min_eigenvalue(const Mat4& h);
double hermiticity_defect(const Mat4& m);
// max-norm of sum chi_ab s_b s_a - I
double tp_defect(const Mat4& chi);
double completeness_defect(const KrausSet& k);

// Haar-random pure state
template <class R>
Vec2 haar_state(R& rng);

}  // namespace qnoise

#include <random>

template <class R>
qnoise::Vec2 qnoise::haar_state(R& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec2 v(cplx(n(rng), n(rng)), cplx(n(rng), n(rng)));
    return v / v.norm();
}
