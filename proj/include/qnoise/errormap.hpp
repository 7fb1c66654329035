#pragma once

#include <array>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/filters.hpp"
#include "qnoise/psd.hpp"
#include "qnoise/quantum.hpp"

namespace qnoise {

// Theta^2 = D1^2 - D2^2 - G2^2 and n = (D1, -i D2, i G2) / Theta.
// Theta is real or purely imaginary; only even functions of it enter the maps.
struct RotationSpec {
    cplx Theta;
    std::array<cplx, 3> n;
    double theta2 = 0.0;
};
RotationSpec rotation_spec(const FiPoint& fi);

// cos(Theta/2) and sin(Theta/2)/Theta as real numbers (cosh/sinh branch for Theta^2 < 0)
struct HalfAngle {
    double c = 1.0;
    double s = 0.5;
};
HalfAngle half_angle(double theta2);

// Pauli transfer matrix of the error channel (applied after U = exp(-i Omega t sx / 2))
RMat4 error_ptm(const FiPoint& fi, bool with_amplitude = true);

// Full state at time t from rho0 through the dressed-state solution
DensityMatrix dressed_evolve(const DensityMatrix& rho0, const FiPoint& fi, double Omega,
                             bool with_amplitude = true);

// Error Kraus operators with Gamma2 = Delta2 = 0. Without amplitude noise these are the
// four dressed-basis operators; with it, the Pauli-form set with xi_pm weights.
KrausSet kraus_nc(const FiPoint& fi, double Omega, bool with_amplitude = false);

// Error process matrix, block-diagonal in {I, sx} + {sy, sz}
ProcessMatrix chi_nm(const FiPoint& fi, bool with_amplitude = false);
ProcessMatrix chi_nm_checked(const FiPoint& fi, bool with_amplitude = false);

struct PauliRates {
    double px = 0.0, py = 0.0, pz = 0.0;
    double p() const { return px + py + pz; }
};
PauliRates pauli_twirl(const FiPoint& fi, bool with_amplitude = false);
ProcessMatrix pauli_channel(const PauliRates& r, double t = 0.0);
// twirl an arbitrary chi by conjugation with the Pauli group
PauliRates twirl_chi(const Mat4& chi);

double depolarizing_rate(const FiPoint& fi);
ProcessMatrix depolarizing_channel(double p_d, double t = 0.0);

enum class ErrorModel { D, NC, NM, NC_I, NM_I };
ErrorModel parse_error_model(const std::string& name);
const char* to_string(ErrorModel m);
double gate_error(const FiPoint& fi, ErrorModel model);

// average gate fidelity of an error channel (identity target)
double error_channel_fidelity(const ProcessMatrix& chi);
double error_channel_fidelity(const KrausSet& k);

// sqrt(tau_c / T2eff), T2eff = 2 / S(Omega); NaN when no correlation time is known.
double zeta_dress(const NoisePsd& psd, double Omega);
// logs a warning when zeta_dress > 0.3; returns zeta
double check_validity(const NoisePsd& psd, double Omega);

struct NmCurve {
    std::vector<double> t, n_cp, gamma_minus;
};
// Non-Markovianity N_CP(t) = int_0^t max(0, -gamma_minus) on a uniform grid of `grid` points.
// OU uses closed-form kernels; tabulated PSDs differentiate the filtered integrals numerically.
NmCurve nm_measure(const NoisePsd& psd, double Omega, double t_max, std::size_t grid,
                   const NoisePsd* amp_psd = nullptr);
// same from explicit kernels
NmCurve nm_from_kernels(const std::vector<double>& t, const std::vector<Kernels>& k);

nlohmann::json chi_to_json(const Mat4& chi);
nlohmann::json kraus_to_json(const KrausSet& k);
nlohmann::json snapshot_json(const FiPoint& fi, double Omega, bool with_amplitude);

}  // namespace qnoise
