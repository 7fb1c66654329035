#include "qnoise/langevin.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>

#include "qnoise/error.hpp"
#include "qnoise/parallel.hpp"

namespace qnoise {

double default_dt(double tau_c, double Omega) {
    double scale = std::numeric_limits<double>::infinity();
    if (tau_c > 0.0) scale = tau_c;
    if (Omega > 0.0) scale = std::min(scale, 1.0 / Omega);
    require(std::isfinite(scale), "cannot pick a default time step without Omega or tau_c");
    return 0.05 * scale;
}

void validate(const DriveConfig& d) {
    require(d.Omega > 0.0 && std::isfinite(d.Omega), "Omega must be > 0");
    require(d.dt > 0.0 && std::isfinite(d.dt), "dt must be > 0");
    require(d.m_mc >= 1, "m_mc must be >= 1");
    require(std::isfinite(d.phi), "phi must be finite");
}

namespace {

Mat2 heun_matrix(const DriveConfig& drive, double w, double a) {
    const double r = drive.Omega * drive.dt + a;
    Mat2 G;
    // G = r s_phi + w s_z
    G << w, r * std::exp(cplx(0.0, -drive.phi)), r * std::exp(cplx(0.0, drive.phi)), -w;
    const Mat2 M = cplx(0.0, -0.5) * G;
    return Mat2::Identity() + M + 0.5 * M * M;
}

}  // namespace

Vec2 heun_step(const Vec2& c, [[maybe_unused]] double t, const DriveConfig& drive, double dephasing_inc,
               double amplitude_inc, double* drift) {
    Vec2 out = heun_matrix(drive, dephasing_inc, amplitude_inc) * c;
    const double n = out.norm();
    if (drift) *drift = std::abs(n - c.norm());
    return out / n;
}

Mat2 heun_step(const Mat2& X, const DriveConfig& drive, double dephasing_inc, double amplitude_inc, double* drift) {
    Mat2 out = heun_matrix(drive, dephasing_inc, amplitude_inc) * X;
    const double n = out.col(0).norm();
    if (drift) *drift = std::abs(n - X.col(0).norm());
    return out / n;
}

PauliStats pauli_expectations(const DensityMatrix& rho) {
    PauliStats p;
    p.mean = bloch(rho);
    return p;
}

std::vector<PauliStats> pauli_expectations(const DensityTrajectory& traj) {
    if (traj.pauli.size() == traj.states.size()) return traj.pauli;
    std::vector<PauliStats> out;
    for (const auto& s : traj.states) out.push_back(pauli_expectations(s));
    return out;
}

namespace {

// partial sums of one block of trajectories
struct BlockSums {
    std::vector<Mat2> rho;                  // [snap * n_states + s]
    std::vector<Eigen::Vector3d> sq;        // second moments of Pauli expectations
    std::vector<Mat4> superop;              // [snap]
    double drift = 0.0;
};

}  // namespace

EnsembleResult evolve_ensemble(const std::vector<DensityMatrix>& rho0, const DriveConfig& drive,
                               const NoiseSource& freq_noise, const NoiseSource* amp_noise,
                               const EnsembleOptions& opt) {
    validate(drive);
    require(!rho0.empty(), "need at least one initial state");
    for (const auto& r : rho0) {
        require(std::abs(r.trace() - 1.0) < 1e-9, "initial state must have unit trace");
        require((r - r.adjoint()).cwiseAbs().maxCoeff() < 1e-9, "initial state must be Hermitian");
    }
    std::vector<std::size_t> snaps = opt.snapshot_steps;
    if (snaps.empty())
        for (std::size_t k = 0; k <= drive.n_steps; ++k) snaps.push_back(k);
    for (std::size_t i = 0; i < snaps.size(); ++i) {
        require(snaps[i] <= drive.n_steps, "snapshot step beyond n_steps");
        if (i > 0) require(snaps[i] > snaps[i - 1], "snapshot steps must be strictly increasing");
    }
    const std::size_t n_states = rho0.size(), n_snap = snaps.size();
    const std::size_t block = std::max<std::size_t>(1, opt.block);
    const std::size_t n_blocks = (drive.m_mc + block - 1) / block;

    auto run_block = [&](std::size_t b) {
        BlockSums bs;
        bs.rho.assign(n_snap * n_states, Mat2::Zero());
        bs.sq.assign(n_snap * n_states, Eigen::Vector3d::Zero());
        bs.superop.assign(n_snap, Mat4::Zero());
        std::vector<double> eta(drive.n_steps), eta_a(drive.n_steps, 0.0);
        const std::size_t first = b * block, last = std::min(drive.m_mc, first + block);
        for (std::size_t traj = first; traj < last; ++traj) {
            if (drive.n_steps > 0) {
                Rng rng = make_stream(opt.seed, traj, 0);
                freq_noise.fill(eta, drive.dt, rng);
                if (amp_noise) {
                    Rng rng_a = make_stream(opt.seed, traj, 1);
                    amp_noise->fill(eta_a, drive.dt, rng_a);
                }
            }
            Mat2 X = Mat2::Identity();
            std::size_t step = 0;
            for (std::size_t k = 0; k < n_snap; ++k) {
                for (; step < snaps[k]; ++step) {
                    double d = 0.0;
                    X = heun_step(X, drive, eta[step] * drive.dt, eta_a[step] * drive.dt, &d);
                    bs.drift = std::max(bs.drift, d);
                }
                bs.superop[k] += unitary_superop(X);
                for (std::size_t s = 0; s < n_states; ++s) {
                    const Mat2 r = X * rho0[s] * X.adjoint();
                    bs.rho[k * n_states + s] += r;
                    const Eigen::Vector3d v = bloch(r);
                    bs.sq[k * n_states + s] += v.cwiseProduct(v);
                }
            }
        }
        return bs;
    };

    std::vector<Mat2> rho_sum(n_snap * n_states, Mat2::Zero());
    std::vector<Eigen::Vector3d> sq_sum(n_snap * n_states, Eigen::Vector3d::Zero());
    std::vector<Mat4> sup_sum(n_snap, Mat4::Zero());
    double drift = 0.0;
    // blocks run in waves and are reduced in index order
    const std::size_t wave = std::max<std::size_t>(1, 4 * thread_count());
    for (std::size_t start = 0; start < n_blocks; start += wave) {
        const std::size_t count = std::min(wave, n_blocks - start);
        std::vector<BlockSums> partial(count);
        parallel_for(count, [&](std::size_t i) { partial[i] = run_block(start + i); });
        for (const auto& bs : partial) {
            for (std::size_t i = 0; i < rho_sum.size(); ++i) {
                rho_sum[i] += bs.rho[i];
                sq_sum[i] += bs.sq[i];
            }
            for (std::size_t k = 0; k < n_snap; ++k) sup_sum[k] += bs.superop[k];
            drift = std::max(drift, bs.drift);
        }
    }

    EnsembleResult res;
    res.max_norm_drift = drift;
    if (drift > 1e-6) spdlog::warn("Heun norm drift {:.3g} per step exceeds 1e-6; reduce dt", drift);
    else spdlog::debug("Heun max norm drift per step {:.3g}", drift);
    const double m = static_cast<double>(drive.m_mc);
    for (std::size_t k = 0; k < n_snap; ++k) {
        res.times.push_back(static_cast<double>(snaps[k]) * drive.dt);
        res.superop.push_back(sup_sum[k] / m);
    }
    res.per_state.resize(n_states);
    for (std::size_t s = 0; s < n_states; ++s) {
        auto& tr = res.per_state[s];
        tr.times = res.times;
        for (std::size_t k = 0; k < n_snap; ++k) {
            const Mat2 rho = rho_sum[k * n_states + s] / m;
            PauliStats p;
            p.mean = bloch(rho);
            if (drive.m_mc > 1) {
                const Eigen::Vector3d var =
                    (sq_sum[k * n_states + s] / m - p.mean.cwiseProduct(p.mean)).cwiseMax(0.0) * (m / (m - 1.0));
                p.se = (var / m).cwiseSqrt();
            }
            tr.states.push_back(rho);
            tr.pauli.push_back(p);
        }
    }
    return res;
}

DensityTrajectory evolve_ensemble(const DensityMatrix& rho0, const DriveConfig& drive, const NoiseSource& freq_noise,
                                  const NoiseSource* amp_noise, const EnsembleOptions& opt) {
    return evolve_ensemble(std::vector<DensityMatrix>{rho0}, drive, freq_noise, amp_noise, opt).per_state.front();
}

void write_trajectory_csv(const DensityTrajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << "t,sx,sy,sz,se_sx,se_sy,se_sz\n" << std::setprecision(17);
    const auto stats = pauli_expectations(traj);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& p = stats[i];
        out << traj.times[i] << ',' << p.mean(0) << ',' << p.mean(1) << ',' << p.mean(2) << ',' << p.se(0) << ','
            << p.se(1) << ',' << p.se(2) << '\n';
    }
}

void write_trajectory_json(const DensityTrajectory& traj, const std::string& path) {
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Mat2& r = traj.states[i];
        nlohmann::json re = {{r(0, 0).real(), r(0, 1).real()}, {r(1, 0).real(), r(1, 1).real()}};
        nlohmann::json im = {{r(0, 0).imag(), r(0, 1).imag()}, {r(1, 0).imag(), r(1, 1).imag()}};
        snaps.push_back({{"t", traj.times[i]}, {"rho", {{"re", re}, {"im", im}}}});
    }
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << nlohmann::json{{"snapshots", snaps}}.dump(2) << '\n';
}

}  // namespace qnoise
