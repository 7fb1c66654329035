#include "qnoise/rb.hpp"

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>

#include "qnoise/error.hpp"
#include "qnoise/filters.hpp"
#include "qnoise/parallel.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

namespace {

constexpr double kX = 0.0, kY = M_PI / 2, kmX = M_PI, kmY = 3 * M_PI / 2;

std::vector<Clifford> make_table() {
    const Pulse X2{kX, 1}, mX2{kmX, 1}, Y2{kY, 1}, mY2{kmY, 1}, X{kX, 2}, Y{kY, 2};
    const std::vector<std::vector<Pulse>> seqs = {
        // Paulis
        {}, {X}, {Y}, {X, Y},
        // 2pi/3 rotations
        {X2, Y2}, {X2, mY2}, {mX2, Y2}, {mX2, mY2}, {Y2, X2}, {Y2, mX2}, {mY2, X2}, {mY2, mX2},
        // pi/2 rotations
        {X2}, {mX2}, {Y2}, {mY2}, {mX2, Y2, X2}, {mX2, mY2, X2},
        // Hadamard-like
        {X, Y2}, {X, mY2}, {Y, X2}, {Y, mX2}, {X2, Y2, X2}, {mX2, Y2, mX2},
    };
    std::vector<Clifford> table;
    for (const auto& s : seqs) {
        Clifford c;
        c.pulses = s;
        c.U = Mat2::Identity();
        for (const auto& p : s) c.U = drive_unitary(1.0, p.phi, p.quarters * M_PI / 2) * c.U;
        table.push_back(std::move(c));
    }
    return table;
}

// |tr(A^dag B)| = 2 iff A and B agree up to a phase
bool same_up_to_phase(const Mat2& a, const Mat2& b) { return std::abs(std::abs((a.adjoint() * b).trace()) - 2.0) < 1e-9; }

std::size_t inverse_index(const Mat2& U) {
    const auto& table = clifford_table();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (same_up_to_phase(table[i].U, U.adjoint())) return i;
    fail(ErrorKind::NumericalFailure, "sequence unitary is not a Clifford");
}

Mat2 rz(double phi) {
    Mat2 u = Mat2::Zero();
    u(0, 0) = std::exp(cplx(0.0, -phi / 2));
    u(1, 1) = std::exp(cplx(0.0, phi / 2));
    return u;
}

struct FitData {
    const std::vector<std::size_t>* m;
    const std::vector<double>* y;
};

int residual(const gsl_vector* x, void* params, gsl_vector* f) {
    const auto* d = static_cast<FitData*>(params);
    const double A = gsl_vector_get(x, 0), lam = gsl_vector_get(x, 1), B = gsl_vector_get(x, 2);
    for (std::size_t i = 0; i < d->m->size(); ++i)
        gsl_vector_set(f, i, A * std::pow(lam, static_cast<double>((*d->m)[i])) + B - (*d->y)[i]);
    return GSL_SUCCESS;
}

int jacobian(const gsl_vector* x, void* params, gsl_matrix* J) {
    const auto* d = static_cast<FitData*>(params);
    const double A = gsl_vector_get(x, 0), lam = gsl_vector_get(x, 1);
    for (std::size_t i = 0; i < d->m->size(); ++i) {
        const double m = static_cast<double>((*d->m)[i]);
        gsl_matrix_set(J, i, 0, std::pow(lam, m));
        gsl_matrix_set(J, i, 1, m == 0.0 ? 0.0 : A * m * std::pow(lam, m - 1.0));
        gsl_matrix_set(J, i, 2, 1.0);
    }
    return GSL_SUCCESS;
}

}  // namespace

void fit_rb_decay(RbResult& res) {
    const auto& y = res.survival_mean;
    double dev = 0.0;
    for (double v : y) dev = std::max(dev, std::abs(v - 1.0));
    if (dev < 1e-12) {
        res.A = 0.5;
        res.B = 0.5;
        res.lambda = 1.0;
        res.lambda_se = 0.0;
        return;
    }
    const std::size_t n = y.size();
    if (n < 3) fail(ErrorKind::FitError, "RB fit needs at least 3 sequence lengths");
    // initial guess from the first and last points with B = 1/2
    const double y0 = std::max(y.front() - 0.5, 1e-6), y1 = std::max(y.back() - 0.5, 1e-6);
    const double dm = static_cast<double>(res.lengths.back() - res.lengths.front());
    double lam0 = std::clamp(std::pow(y1 / y0, 1.0 / std::max(dm, 1.0)), 0.5, 1.0 - 1e-9);
    const double A0 = y0 / std::pow(lam0, static_cast<double>(res.lengths.front()));

    gsl_set_error_handler_off();
    FitData data{&res.lengths, &y};
    gsl_multifit_nlinear_fdf fdf;
    fdf.f = &residual;
    fdf.df = &jacobian;
    fdf.fvv = nullptr;
    fdf.n = n;
    fdf.p = 3;
    fdf.params = &data;
    gsl_multifit_nlinear_parameters params = gsl_multifit_nlinear_default_parameters();
    gsl_multifit_nlinear_workspace* w = gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &params, n, 3);
    gsl_vector* x0 = gsl_vector_alloc(3);
    gsl_vector_set(x0, 0, A0);
    gsl_vector_set(x0, 1, lam0);
    gsl_vector_set(x0, 2, 0.5);
    gsl_multifit_nlinear_init(x0, &fdf, w);
    int info = 0;
    const int status = gsl_multifit_nlinear_driver(500, 1e-12, 1e-12, 1e-12, nullptr, nullptr, &info, w);
    const gsl_vector* x = gsl_multifit_nlinear_position(w);
    res.A = gsl_vector_get(x, 0);
    res.lambda = gsl_vector_get(x, 1);
    res.B = gsl_vector_get(x, 2);
    gsl_matrix* cov = gsl_matrix_alloc(3, 3);
    gsl_multifit_nlinear_covar(gsl_multifit_nlinear_jac(w), 0.0, cov);
    double chisq = 0.0;
    gsl_blas_ddot(gsl_multifit_nlinear_residual(w), gsl_multifit_nlinear_residual(w), &chisq);
    const double dof = n > 3 ? static_cast<double>(n - 3) : 1.0;
    res.lambda_se = std::sqrt(std::max(0.0, gsl_matrix_get(cov, 1, 1) * chisq / dof));
    gsl_matrix_free(cov);
    gsl_vector_free(x0);
    gsl_multifit_nlinear_free(w);
    if (status != GSL_SUCCESS && status != GSL_EMAXITER)
        fail(ErrorKind::FitError, std::string("RB fit failed: ") + gsl_strerror(status));
    if (!std::isfinite(res.lambda) || res.lambda <= 0.0 || res.lambda > 1.0 + 1e-6 || res.A <= 0.0)
        fail(ErrorKind::FitError, "RB survival does not decay (lambda = " + std::to_string(res.lambda) +
                                      ", A = " + std::to_string(res.A) + ")");
}

int Clifford::quarter_count() const {
    int n = 0;
    for (const auto& p : pulses) n += p.quarters;
    return n;
}

const std::vector<Clifford>& clifford_table() {
    static const std::vector<Clifford> t = make_table();
    return t;
}

double mean_pulses_per_clifford() {
    double n = 0.0;
    for (const auto& c : clifford_table()) n += c.quarter_count();
    return n / static_cast<double>(clifford_table().size());
}

PulseErrorFn depolarizing_pulse_error(double p_quarter) {
    require(p_quarter >= 0.0 && p_quarter <= 0.75, "depolarizing probability must be in [0, 3/4]");
    return [p_quarter](double angle) {
        const double f = std::pow(1.0 - 4.0 * p_quarter / 3.0, angle / (M_PI / 2));
        return chi_to_superop(depolarizing_channel(0.75 * (1.0 - f)).chi);
    };
}

PulseErrorFn nm_pulse_error(const NoisePsd& psd, double Omega, bool twirl) {
    require(Omega > 0.0, "Omega must be > 0");
    return [psd, Omega, twirl](double angle) {
        const FiPoint fi = filtered_integrals_at(psd, nullptr, Omega, angle / Omega);
        const Mat4 chi = chi_nm_checked(fi).chi;
        if (!twirl) return chi_to_superop(chi);
        return chi_to_superop(pauli_channel(twirl_chi(chi)).chi);
    };
}

double rb_depolarizing_lambda(double p_quarter) {
    const double f = 1.0 - 4.0 * p_quarter / 3.0;
    double s = 0.0;
    for (const auto& c : clifford_table()) s += std::pow(f, c.quarter_count());
    return s / static_cast<double>(clifford_table().size());
}

RbResult rb_simulate(const PulseErrorFn& error, const RbOptions& opt) {
    RbResult res;
    res.lengths = opt.lengths;
    if (res.lengths.empty())
        for (std::size_t m = 1; m <= 1024; m *= 2) res.lengths.push_back(m);
    require(opt.n_seq >= 1, "n_seq must be >= 1");
    for (std::size_t i = 1; i < res.lengths.size(); ++i)
        require(res.lengths[i] > res.lengths[i - 1], "RB lengths must be strictly increasing");

    const auto& table = clifford_table();
    std::map<int, Mat4> err_by_quarters;
    for (const auto& c : table)
        for (const auto& p : c.pulses)
            if (!err_by_quarters.count(p.quarters)) err_by_quarters[p.quarters] = error(p.quarters * M_PI / 2);
    std::vector<Mat4> noisy(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        Mat4 S = Mat4::Identity();
        for (const auto& p : table[i].pulses) {
            const Mat4 Rz = unitary_superop(rz(p.phi));
            const Mat4 E = Rz * err_by_quarters.at(p.quarters) * Rz.adjoint();
            S = E * unitary_superop(drive_unitary(1.0, p.phi, p.quarters * M_PI / 2)) * S;
        }
        noisy[i] = S;
    }

    const std::size_t nl = res.lengths.size();
    std::vector<double> surv(nl * opt.n_seq);
    parallel_for(nl * opt.n_seq, [&](std::size_t job) {
        const std::size_t li = job / opt.n_seq, q = job % opt.n_seq;
        Rng rng = make_stream(opt.seed, li, q);
        std::uniform_int_distribution<std::size_t> pick(0, table.size() - 1);
        Eigen::Vector4cd v(1.0, 0.0, 0.0, 0.0);
        Mat2 U = Mat2::Identity();
        for (std::size_t k = 0; k < res.lengths[li]; ++k) {
            const std::size_t c = pick(rng);
            v = noisy[c] * v;
            U = table[c].U * U;
        }
        v = noisy[inverse_index(U)] * v;
        const double p = std::clamp(v(0).real(), 0.0, 1.0);
        if (opt.shots > 0) {
            std::binomial_distribution<long> bin(opt.shots, p);
            surv[job] = static_cast<double>(bin(rng)) / static_cast<double>(opt.shots);
        } else {
            surv[job] = p;
        }
    });
    for (std::size_t li = 0; li < nl; ++li) {
        double s = 0.0, s2 = 0.0;
        for (std::size_t q = 0; q < opt.n_seq; ++q) {
            const double v = surv[li * opt.n_seq + q];
            s += v;
            s2 += v * v;
        }
        const double m = static_cast<double>(opt.n_seq), mean = s / m;
        const double var = opt.n_seq > 1 ? std::max(0.0, (s2 - m * mean * mean) / (m - 1.0)) : 0.0;
        res.survival_mean.push_back(mean);
        res.survival_se.push_back(std::sqrt(var / m));
    }
    fit_rb_decay(res);
    res.r = (1.0 - res.lambda) / 2.0;
    res.eps_rb_literal = 2.0 * res.lambda / 3.0 + 0.5;
    res.pulse_proxy = res.r / 2.2;
    return res;
}

void write_rb_csv(const RbResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << "length,survival_mean,survival_se\n" << std::setprecision(17);
    for (std::size_t i = 0; i < res.lengths.size(); ++i)
        out << res.lengths[i] << ',' << res.survival_mean[i] << ',' << res.survival_se[i] << '\n';
}

nlohmann::json rb_json(const RbResult& res) {
    return {{"model", "A * lambda^m + B"},
            {"A", res.A},
            {"B", res.B},
            {"lambda", res.lambda},
            {"lambda_se", res.lambda_se},
            {"clifford_error", res.r},
            {"eps_rb_literal", res.eps_rb_literal},
            {"pulse_error_proxy", res.pulse_proxy},
            {"mean_pulses_per_clifford", mean_pulses_per_clifford()}};
}

}  // namespace qnoise
