#include "qnoise/noisegen.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "qnoise/error.hpp"

namespace qnoise {

double ou_step(double eta, double dt, double tau_c, double c, double u) {
    const double decay = std::exp(-dt / tau_c);
    // -expm1(-2x) keeps precision for dt << tau
    const double var = 0.5 * c * tau_c * (-std::expm1(-2.0 * dt / tau_c));
    return eta * decay + std::sqrt(var) * u;
}

Covariance ou_covariance(std::size_t n, double dt, double c, double tau_c) {
    return covariance_from_autocov(n, dt, [&](double u) { return 0.5 * c * tau_c * std::exp(-std::abs(u) / tau_c); });
}

Covariance covariance_from_autocov(std::size_t n, double dt, const std::function<double(double)>& C) {
    const auto m = static_cast<Eigen::Index>(n);
    Covariance cov(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) cov(i, j) = cov(j, i) = C(static_cast<double>(i - j) * dt);
    return cov;
}

FranklinGenerator::FranklinGenerator(const Covariance& cov) {
    require(cov.rows() == cov.cols() && cov.rows() > 0, "covariance must be square and non-empty");
    const double norm = cov.cwiseAbs().maxCoeff();
    if (norm == 0.0) {
        L_ = Eigen::MatrixXd::Zero(cov.rows(), cov.cols());
        return;
    }
    require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * norm, "covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -1e-10 * norm)
        fail(ErrorKind::NotPositiveSemidefinite,
             "covariance has eigenvalue " + std::to_string(es.eigenvalues()(0)));
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        Covariance jittered = cov;
        jittered.diagonal().array() += 1e-12 * norm;
        llt.compute(jittered);
        if (llt.info() != Eigen::Success)
            fail(ErrorKind::NotPositiveSemidefinite, "Cholesky factorization failed after jitter");
    }
    L_ = llt.matrixL();
}

void FranklinGenerator::generate(std::span<const double> u, std::span<double> out) const {
    require(u.size() == size() && out.size() == size(), "draw count must equal grid size");
    Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
    Eigen::Map<Eigen::VectorXd> ov(out.data(), static_cast<Eigen::Index>(out.size()));
    ov.noalias() = L_.triangularView<Eigen::Lower>() * uv;
}

NoiseTrajectory franklin_trajectory(const Covariance& cov, std::span<const double> u) {
    FranklinGenerator gen(cov);
    NoiseTrajectory tr;
    tr.values.resize(gen.size());
    gen.generate(u, tr.values);
    return tr;
}

std::size_t percival_draw_count(std::size_t m_f) { return m_f + 2; }

namespace {

struct PlanCache {
    std::mutex mu;
    std::map<std::size_t, fftw_plan> plans;
    ~PlanCache() {
        for (auto& [n, p] : plans) fftw_destroy_plan(p);
    }
};

fftw_plan c2r_plan(std::size_t n) {
    static PlanCache cache;
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.plans.find(n);
    if (it != cache.plans.end()) return it->second;
    auto* in = fftw_alloc_complex(n / 2 + 1);
    auto* out = fftw_alloc_real(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    cache.plans.emplace(n, p);
    return p;
}

}  // namespace

NoiseTrajectory percival_trajectory(const NoisePsd& psd, std::size_t m_f, double t0, double tf,
                                    std::span<const double> draws) {
    if (m_f < 4 || m_f % 2 != 0) fail(ErrorKind::InvalidInput, "Percival sample count must be even and >= 4");
    require(tf > t0, "Percival needs tf > t0");
    require(draws.size() >= percival_draw_count(m_f), "not enough normal draws for Percival");
    const double T = tf - t0;
    const std::size_t half = m_f / 2;

    // nu_m for m = 1..m_f/2+1; the upper half is the complex conjugate mirror
    auto* spec = fftw_alloc_complex(half + 1);
    auto* out = fftw_alloc_real(m_f);
    for (std::size_t k = 0; k <= half; ++k) {
        const double f = static_cast<double>(k) / T;
        const double S = psd(2.0 * std::numbers::pi * f);
        const double amp = std::sqrt(0.5 * S);
        double re = amp * draws[2 * k], im = amp * draws[2 * k + 1];
        if (k == 0 || k == half) {
            re *= std::numbers::sqrt2;
            im = 0.0;
        }
        // c2r evaluates sum X_k e^{+i...}; conjugate to get the e^{-i 2 pi f t} series
        spec[k][0] = re;
        spec[k][1] = -im;
    }
    fftw_execute_dft_c2r(c2r_plan(m_f), spec, out);
    NoiseTrajectory tr;
    tr.dt = T / static_cast<double>(m_f);
    tr.values.resize(m_f);
    const double scale = 1.0 / std::sqrt(T);
    for (std::size_t j = 0; j < m_f; ++j) tr.values[j] = out[j] * scale;
    fftw_free(spec);
    fftw_free(out);
    return tr;
}

void ZeroNoise::fill(std::span<double> eta, double, Rng&) const { std::fill(eta.begin(), eta.end(), 0.0); }

void ConstantNoise::fill(std::span<double> eta, double, Rng&) const { std::fill(eta.begin(), eta.end(), v_); }

void OuNoise::fill(std::span<double> eta, double dt, Rng& rng) const {
    if (eta.empty()) return;
    eta[0] = std::sqrt(0.5 * c_ * tau_) * unit_normal(rng);
    for (std::size_t i = 1; i < eta.size(); ++i) eta[i] = ou_step(eta[i - 1], dt, tau_, c_, unit_normal(rng));
}

void PercivalNoise::fill(std::span<double> eta, double dt, Rng& rng) const {
    if (eta.empty()) return;
    std::size_t m_f = std::max<std::size_t>(4, 2 * eta.size());
    m_f += m_f % 2;
    std::vector<double> draws(percival_draw_count(m_f));
    for (auto& d : draws) d = unit_normal(rng);
    const auto tr = percival_trajectory(psd_, m_f, 0.0, dt * static_cast<double>(m_f), draws);
    std::copy_n(tr.values.begin(), eta.size(), eta.begin());
}

void FranklinNoise::fill(std::span<double> eta, double, Rng& rng) const {
    require(eta.size() == gen_.size(), "Franklin noise grid does not match the step count");
    std::vector<double> u(eta.size());
    for (auto& d : u) d = unit_normal(rng);
    gen_.generate(u, eta);
}

std::unique_ptr<NoiseSource> make_noise_source(const NoisePsd& psd) {
    if (psd.is_zero()) return std::make_unique<ZeroNoise>();
    if (psd.kind() == NoisePsd::Kind::OrnsteinUhlenbeck) return std::make_unique<OuNoise>(psd.c(), psd.tau_c());
    return std::make_unique<PercivalNoise>(psd);
}

}  // namespace qnoise
