#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qnoise/psd.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

struct NoiseTrajectory {
    double dt = 0.0;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// Exact OU update: eta e^{-dt/tau} + sqrt((c tau/2)(1 - e^{-2dt/tau})) u
double ou_step(double eta, double dt, double tau_c, double c, double u);

using Covariance = Eigen::MatrixXd;

// Fully relaxed OU covariance on n points spaced dt
Covariance ou_covariance(std::size_t n, double dt, double c, double tau_c);
Covariance covariance_from_autocov(std::size_t n, double dt, const std::function<double(double)>& C);

// Cholesky factor with the 1e-12 jitter policy; rejects eigenvalues < -1e-10 ||C||.
class FranklinGenerator {
public:
    explicit FranklinGenerator(const Covariance& cov);
    std::size_t size() const { return static_cast<std::size_t>(L_.rows()); }
    const Eigen::MatrixXd& factor() const { return L_; }
    void generate(std::span<const double> u, std::span<double> out) const;

private:
    Eigen::MatrixXd L_;
};

NoiseTrajectory franklin_trajectory(const Covariance& cov, std::span<const double> u);

// Percival's method. m_f even >= 4; output has m_f samples at t0 + j (tf - t0)/m_f.
// S_m is the two-sided density at w_m = 2 pi f_m, f_m = (m-1)/(tf - t0); each of the m_f/2 + 1
// coefficients takes its own pair of normals, so draws holds m_f + 2 values.
NoiseTrajectory percival_trajectory(const NoisePsd& psd, std::size_t m_f, double t0, double tf,
                                    std::span<const double> draws);
std::size_t percival_draw_count(std::size_t m_f);

// Source of noise trajectories for the Langevin integrator: fills eta(t_i), i < n.
class NoiseSource {
public:
    virtual ~NoiseSource() = default;
    virtual void fill(std::span<double> eta, double dt, Rng& rng) const = 0;
    virtual double correlation_time() const { return 0.0; }
};

class ZeroNoise final : public NoiseSource {
public:
    void fill(std::span<double> eta, double dt, Rng& rng) const override;
};

// stationary start, exact update
class OuNoise final : public NoiseSource {
public:
    OuNoise(double c, double tau_c) : c_(c), tau_(tau_c) {}
    void fill(std::span<double> eta, double dt, Rng& rng) const override;
    double correlation_time() const override { return tau_; }

private:
    double c_, tau_;
};

// constant offset, for deterministic checks
class ConstantNoise final : public NoiseSource {
public:
    explicit ConstantNoise(double value) : v_(value) {}
    void fill(std::span<double> eta, double dt, Rng& rng) const override;

private:
    double v_;
};

class PercivalNoise final : public NoiseSource {
public:
    explicit PercivalNoise(NoisePsd psd) : psd_(std::move(psd)) {}
    void fill(std::span<double> eta, double dt, Rng& rng) const override;

private:
    NoisePsd psd_;
};

class FranklinNoise final : public NoiseSource {
public:
    explicit FranklinNoise(const Covariance& cov) : gen_(cov) {}
    void fill(std::span<double> eta, double dt, Rng& rng) const override;

private:
    FranklinGenerator gen_;
};

std::unique_ptr<NoiseSource> make_noise_source(const NoisePsd& psd);

}  // namespace qnoise
