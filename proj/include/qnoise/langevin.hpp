#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qnoise/noisegen.hpp"
#include "qnoise/quantum.hpp"

namespace qnoise {

struct DriveConfig {
    double Omega = 0.0;  // rad/s
    double phi = 0.0;    // drive phase
    double dt = 0.0;     // s
    std::size_t n_steps = 0;
    std::size_t m_mc = 1;
};

// 0.05 * min(tau_c, 1/Omega); tau_c <= 0 means no correlation scale
double default_dt(double tau_c, double Omega);

void validate(const DriveConfig& d);

// One Heun step of dc = -(i/2)[(Omega dt + a) s_phi + w s_z] c, renormalized.
// `drift` receives | ||c'|| - 1 | before renormalization.
Vec2 heun_step(const Vec2& c, double t, const DriveConfig& drive, double dephasing_inc, double amplitude_inc,
               double* drift = nullptr);

// Same step applied to a 2x2 propagator. The Heun matrix for a traceless generator is a
// scalar multiple of a unitary, so column renormalization is exact for every input state.
Mat2 heun_step(const Mat2& X, const DriveConfig& drive, double dephasing_inc, double amplitude_inc,
               double* drift = nullptr);

struct PauliStats {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Vector3d se = Eigen::Vector3d::Zero();
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::vector<PauliStats> pauli;  // per time, standard errors from trajectory variance
};

struct EnsembleOptions {
    std::uint64_t seed = 1;
    // steps (0..n_steps) at which to record; empty means every step
    std::vector<std::size_t> snapshot_steps;
    std::size_t block = 64;  // trajectories per reduction block
};

struct EnsembleResult {
    std::vector<double> times;
    std::vector<DensityTrajectory> per_state;  // one per initial state
    std::vector<Mat4> superop;                 // ensemble-averaged superoperator per snapshot
    double max_norm_drift = 0.0;
};

EnsembleResult evolve_ensemble(const std::vector<DensityMatrix>& rho0, const DriveConfig& drive,
                               const NoiseSource& freq_noise, const NoiseSource* amp_noise,
                               const EnsembleOptions& opt);
DensityTrajectory evolve_ensemble(const DensityMatrix& rho0, const DriveConfig& drive, const NoiseSource& freq_noise,
                                  const NoiseSource* amp_noise, const EnsembleOptions& opt);

// per-time Pauli expectations and standard errors
std::vector<PauliStats> pauli_expectations(const DensityTrajectory& traj);
PauliStats pauli_expectations(const DensityMatrix& rho);

void write_trajectory_csv(const DensityTrajectory& traj, const std::string& path);
void write_trajectory_json(const DensityTrajectory& traj, const std::string& path);

}  // namespace qnoise
