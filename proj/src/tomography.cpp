#include "qnoise/tomography.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

TomographySetup make_setup() {
    TomographySetup s;
    const double r = M_SQRT1_2;
    const Vec2 plus(r, r), plus_i(r, cplx(0.0, r)), zero(1.0, 0.0), one(0.0, 1.0);
    s.states = {ket_proj(plus), ket_proj(plus_i), ket_proj(zero), ket_proj(one)};
    for (int b = 0; b < 3; ++b) {
        s.povm[2 * b] = (Mat2::Identity() + pauli(b + 1)) / 6.0;
        s.povm[2 * b + 1] = (Mat2::Identity() - pauli(b + 1)) / 6.0;
    }
    for (int st = 0; st < kStates; ++st)
        for (int mu = 0; mu < kOutcomes; ++mu)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    s.D[st][mu](a, b) = (s.povm[mu] * pauli(a) * s.states[st] * pauli(b)).trace();
    return s;
}

// unnormalized block-Cholesky chi
Mat4 chi_raw(const CholParams& l) {
    Mat2 A, B;
    A << l[0], 0.0, cplx(0.0, l[1]), l[2];
    B << l[3], 0.0, l[4], l[5];
    const Mat2 a = A * A.adjoint(), b = B * B.adjoint();
    Mat4 chi = Mat4::Zero();
    chi.block<2, 2>(0, 0) = a;
    chi.block<2, 2>(2, 2) = b;
    return chi;
}

double norm2(const CholParams& l) {
    double s = 0.0;
    for (double v : l) s += v * v;
    return s;
}

QuadraticModel make_quadratic() {
    QuadraticModel m;
    const auto& setup = default_setup();
    auto prob = [&](const CholParams& l, int s, int mu) {
        double p = 0.0;
        const Mat4 chi = chi_raw(l);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) p += (chi(a, b) * setup.D[s][mu](a, b)).real();
        return p;
    };
    for (int s = 0; s < kStates; ++s)
        for (int mu = 0; mu < kOutcomes; ++mu) {
            auto& Q = m.Q[s][mu];
            for (int i = 0; i < 6; ++i) {
                CholParams ei{};
                ei[i] = 1.0;
                Q(i, i) = prob(ei, s, mu);
            }
            for (int i = 0; i < 6; ++i)
                for (int j = i + 1; j < 6; ++j) {
                    CholParams e{};
                    e[i] = e[j] = 1.0;
                    Q(i, j) = Q(j, i) = 0.5 * (prob(e, s, mu) - Q(i, i) - Q(j, j));
                }
        }
    return m;
}

const char* state_names[kStates] = {"+", "+i", "0", "1"};
const char* basis_names[3] = {"x", "y", "z"};

int parse_index(const std::string& v, const char* const* names, int n, const std::string& what, std::size_t row) {
    for (int i = 0; i < n; ++i)
        if (v == names[i]) return i;
    try {
        std::size_t pos = 0;
        const int k = std::stoi(v, &pos);
        if (pos == v.size() && k >= 0 && k < n) return k;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::InvalidInput, "counts row " + std::to_string(row) + ": unknown " + what + " '" + v + "'");
}

}  // namespace

const TomographySetup& default_setup() {
    static const TomographySetup s = make_setup();
    return s;
}

ProbTable born_probs(const Mat4& chi, const TomographySetup& setup) {
    ProbTable p{};
    for (int s = 0; s < kStates; ++s)
        for (int mu = 0; mu < kOutcomes; ++mu) {
            cplx acc = 0.0;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) acc += chi(a, b) * setup.D[s][mu](a, b);
            p[s][mu] = acc.real();
        }
    return p;
}

Mat4 linear_inversion(const ProbTable& p, const TomographySetup& setup) {
    // Hermitian basis: E_kk, E_kl + E_lk, i(E_kl - E_lk)
    std::vector<Mat4> basis;
    for (int k = 0; k < 4; ++k) {
        Mat4 h = Mat4::Zero();
        h(k, k) = 1.0;
        basis.push_back(h);
    }
    for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) {
            Mat4 h = Mat4::Zero();
            h(k, l) = h(l, k) = 1.0;
            basis.push_back(h);
            Mat4 g = Mat4::Zero();
            g(k, l) = I_unit;
            g(l, k) = -I_unit;
            basis.push_back(g);
        }
    Eigen::Matrix<double, kStates * kOutcomes, 16> A;
    Eigen::Matrix<double, kStates * kOutcomes, 1> y;
    for (int s = 0; s < kStates; ++s)
        for (int mu = 0; mu < kOutcomes; ++mu) {
            const int row = s * kOutcomes + mu;
            y(row) = p[s][mu];
            for (int k = 0; k < 16; ++k) A(row, k) = (basis[k].cwiseProduct(setup.D[s][mu])).sum().real();
        }
    const Eigen::Matrix<double, 16, 1> x = A.colPivHouseholderQr().solve(y);
    Mat4 chi = Mat4::Zero();
    for (int k = 0; k < 16; ++k) chi += x(k) * basis[k];
    return chi;
}

CountRecord sample_shots(const ProbTable& p, long shots_per_setting, Rng& rng, double time) {
    require(shots_per_setting >= 0, "shot count must be >= 0");
    CountRecord rec;
    rec.time = time;
    for (int s = 0; s < kStates; ++s)
        for (int b = 0; b < 3; ++b) {
            const double q = std::clamp(3.0 * p[s][2 * b], 0.0, 1.0);
            CountRow row{s, b, time, 0, 0};
            for (long n = 0; n < shots_per_setting; ++n) {
                if (unit_uniform(rng) < q) ++row.n_plus;
                else ++row.n_minus;
            }
            rec.rows.push_back(row);
        }
    return rec;
}

void check_counts(const CountRecord& counts) {
    std::array<std::array<long, 3>, kStates> shots{};
    std::array<std::array<bool, 3>, kStates> seen{};
    for (const auto& r : counts.rows) {
        if (r.state < 0 || r.state >= kStates || r.basis < 0 || r.basis > 2)
            fail(ErrorKind::InvalidInput, "count row with invalid state/basis index");
        if (r.n_plus < 0 || r.n_minus < 0) fail(ErrorKind::InvalidInput, "negative counts");
        seen[r.state][r.basis] = true;
        shots[r.state][r.basis] += r.n_plus + r.n_minus;
    }
    for (int s = 0; s < kStates; ++s)
        for (int b = 0; b < 3; ++b) {
            if (!seen[s][b])
                fail(ErrorKind::DegenerateData, "counts at t=" + std::to_string(counts.time) + ": missing state '" +
                                                    state_names[s] + "' basis '" + basis_names[b] + "'");
            if (shots[s][b] == 0)
                fail(ErrorKind::DegenerateData, "counts at t=" + std::to_string(counts.time) + ": state '" +
                                                    state_names[s] + "' basis '" + basis_names[b] + "' has no shots");
        }
}

ProbTable count_table(const CountRecord& counts) {
    ProbTable n{};
    for (const auto& r : counts.rows) {
        n[r.state][2 * r.basis] += static_cast<double>(r.n_plus);
        n[r.state][2 * r.basis + 1] += static_cast<double>(r.n_minus);
    }
    return n;
}

ProbTable frequencies(const CountRecord& counts) {
    check_counts(counts);
    ProbTable f = count_table(counts);
    for (auto& row : f) {
        double tot = 0.0;
        for (double v : row) tot += v;
        for (double& v : row) v /= tot;
    }
    return f;
}

std::vector<CountRecord> read_counts_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open counts file " + path);
    std::map<double, CountRecord> by_time;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (row == 1 && line.find("state") != std::string::npos) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell.erase(0, cell.find_first_not_of(" \t"));
            cell.erase(cell.find_last_not_of(" \t\r") + 1);
            f.push_back(cell);
        }
        if (f.size() != 5)
            fail(ErrorKind::InvalidInput, "counts row " + std::to_string(row) + ": expected 5 columns");
        CountRow r;
        r.state = parse_index(f[0], state_names, kStates, "state", row);
        r.basis = parse_index(f[1], basis_names, 3, "basis", row);
        try {
            r.time = std::stod(f[2]);
            r.n_plus = std::stol(f[3]);
            r.n_minus = std::stol(f[4]);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, "counts row " + std::to_string(row) + ": non-numeric field");
        }
        if (r.n_plus < 0 || r.n_minus < 0)
            fail(ErrorKind::InvalidInput, "counts row " + std::to_string(row) + ": negative count");
        auto& rec = by_time[r.time];
        rec.time = r.time;
        rec.rows.push_back(r);
    }
    std::vector<CountRecord> out;
    for (auto& [t, rec] : by_time) out.push_back(std::move(rec));
    if (out.empty()) fail(ErrorKind::DegenerateData, "counts file " + path + " has no rows");
    return out;
}

void write_counts_csv(const std::vector<CountRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << "state,basis,time_s,n_plus,n_minus\n" << std::setprecision(17);
    for (const auto& rec : records)
        for (const auto& r : rec.rows)
            out << state_names[r.state] << ',' << basis_names[r.basis] << ',' << r.time << ',' << r.n_plus << ','
                << r.n_minus << '\n';
}

CholParams normalize(const CholParams& l) {
    const double n = std::sqrt(norm2(l));
    if (n == 0.0) fail(ErrorKind::NumericalFailure, "zero Cholesky parameter vector");
    CholParams o;
    for (int i = 0; i < 6; ++i) o[i] = l[i] / n;
    return o;
}

Mat4 chi_from_cholesky(const CholParams& l) { return chi_raw(normalize(l)); }

const QuadraticModel& quadratic_model() {
    static const QuadraticModel m = make_quadratic();
    return m;
}

namespace {

using Vec6 = Eigen::Matrix<double, 6, 1>;

// -sum w log p and its gradient with respect to the unnormalized parameters
double objective(const Vec6& l, const ProbTable& w, Vec6* grad) {
    const auto& m = quadratic_model();
    const double n2 = l.squaredNorm();
    if (grad) grad->setZero();
    if (n2 == 0.0) return 1e300;
    double f = 0.0;
    for (int s = 0; s < kStates; ++s)
        for (int mu = 0; mu < kOutcomes; ++mu) {
            if (w[s][mu] == 0.0) continue;
            const Vec6 Ql = m.Q[s][mu] * l;
            const double p = l.dot(Ql) / n2;
            if (p <= 1e-300) {
                if (grad) grad->setZero();
                return 1e300;
            }
            f -= w[s][mu] * std::log(p);
            if (grad) *grad -= w[s][mu] * (2.0 * (Ql - p * l) / n2) / p;
        }
    return f;
}

struct FitData {
    const ProbTable* w;
};

double gsl_f(const gsl_vector* x, void* params) {
    Vec6 l;
    for (int i = 0; i < 6; ++i) l(i) = gsl_vector_get(x, i);
    return objective(l, *static_cast<FitData*>(params)->w, nullptr);
}

void gsl_df(const gsl_vector* x, void* params, gsl_vector* g) {
    Vec6 l, gr;
    for (int i = 0; i < 6; ++i) l(i) = gsl_vector_get(x, i);
    objective(l, *static_cast<FitData*>(params)->w, &gr);
    for (int i = 0; i < 6; ++i) gsl_vector_set(g, i, gr(i));
}

void gsl_fdf(const gsl_vector* x, void* params, double* f, gsl_vector* g) {
    Vec6 l, gr;
    for (int i = 0; i < 6; ++i) l(i) = gsl_vector_get(x, i);
    *f = objective(l, *static_cast<FitData*>(params)->w, &gr);
    for (int i = 0; i < 6; ++i) gsl_vector_set(g, i, gr(i));
}

struct LocalFit {
    Vec6 l;
    double f;
    double grad;
    int iters;
};

// Newton iterations with the exact Hessian; the objective is scale invariant, so the
// radial direction is pinned by adding l l^T
Vec6 newton_polish(Vec6 l, const ProbTable& w) {
    const auto& m = quadratic_model();
    l.normalize();
    Vec6 g;
    double f = objective(l, w, &g);
    for (int it = 0; it < 50 && f < 1e299; ++it) {
        Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
        double W = 0.0;
        for (int s = 0; s < kStates; ++s)
            for (int mu = 0; mu < kOutcomes; ++mu) {
                if (w[s][mu] == 0.0) continue;
                const Vec6 Ql = m.Q[s][mu] * l;
                const double q = l.dot(Ql);
                H -= w[s][mu] * (2.0 * m.Q[s][mu] / q - 4.0 * Ql * Ql.transpose() / (q * q));
                W += w[s][mu];
            }
        H += W * (2.0 * Eigen::Matrix<double, 6, 6>::Identity() - 4.0 * l * l.transpose());
        H += l * l.transpose();
        const Eigen::LLT<Eigen::Matrix<double, 6, 6>> llt(H);
        if (llt.info() != Eigen::Success) break;
        const Vec6 step = -llt.solve(g);
        if (step.norm() < 1e-15) break;
        double a = 1.0;
        bool moved = false;
        for (int k = 0; k < 30; ++k, a *= 0.5) {
            const Vec6 trial = (l + a * step).normalized();
            Vec6 gt;
            const double ft = objective(trial, w, &gt);
            if (ft <= f) {
                moved = trial != l;
                l = trial;
                f = ft;
                g = gt;
                break;
            }
        }
        if (!moved) break;
    }
    return l;
}

LocalFit minimize_from(Vec6 l, const ProbTable& w, const MleOptions& opt) {
    FitData data{&w};
    gsl_multimin_function_fdf fn;
    fn.n = 6;
    fn.f = &gsl_f;
    fn.df = &gsl_df;
    fn.fdf = &gsl_fdf;
    fn.params = &data;
    gsl_vector* x = gsl_vector_alloc(6);
    gsl_multimin_fdfminimizer* mz = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 6);
    int total = 0;
    LocalFit best{l, objective(l, w, nullptr), 0.0, 0};
    // restarts from the renormalized point let BFGS recover after line-search stalls
    for (int round = 0; round < 20 && total < opt.max_iter; ++round) {
        l.normalize();
        for (int i = 0; i < 6; ++i) gsl_vector_set(x, i, l(i));
        gsl_multimin_fdfminimizer_set(mz, &fn, x, 0.01, 0.1);
        int status = GSL_CONTINUE;
        while (status == GSL_CONTINUE && total < opt.max_iter) {
            ++total;
            if (gsl_multimin_fdfminimizer_iterate(mz) != GSL_SUCCESS) break;
            const gsl_vector* cur = gsl_multimin_fdfminimizer_x(mz);
            double xn = 0.0;
            for (int i = 0; i < 6; ++i) xn += gsl_vector_get(cur, i) * gsl_vector_get(cur, i);
            status = gsl_multimin_test_gradient(gsl_multimin_fdfminimizer_gradient(mz), opt.grad_tol / std::sqrt(xn));
        }
        const gsl_vector* cur = gsl_multimin_fdfminimizer_x(mz);
        for (int i = 0; i < 6; ++i) l(i) = gsl_vector_get(cur, i);
        Vec6 g;
        const double f = objective(l, w, &g);
        const double gn = g.norm() * l.norm();
        if (f <= best.f) best = {l, f, gn, total};
        if (gn < opt.grad_tol) break;
    }
    best.iters = total;
    gsl_multimin_fdfminimizer_free(mz);
    gsl_vector_free(x);
    return best;
}

}  // namespace

double log_likelihood(const CholParams& l, const ProbTable& weights) {
    Vec6 v;
    for (int i = 0; i < 6; ++i) v(i) = l[i];
    return -objective(v, weights, nullptr);
}

MleResult mle_fit(const ProbTable& freqs, const MleOptions& opt) {
    gsl_set_error_handler_off();
    Rng rng = make_stream(opt.seed, 0, 0);
    LocalFit best{Vec6::Zero(), std::numeric_limits<double>::infinity(), 0.0, 0};
    for (int k = 0; k < std::max(1, opt.starts); ++k) {
        Vec6 l0;
        for (int i = 0; i < 6; ++i) l0(i) = unit_normal(rng);
        if (k == 0) l0 << 1.0, 0.05, 0.05, 0.05, 0.0, 0.05;  // near identity
        const LocalFit r = minimize_from(l0, freqs, opt);
        if (r.f < best.f) best = r;
    }
    if (std::isfinite(best.f) && best.f < 1e299) {
        best.l = newton_polish(best.l, freqs);
        Vec6 g;
        best.f = objective(best.l, freqs, &g);
        best.grad = g.norm();
    }
    if (!std::isfinite(best.f) || best.f >= 1e299)
        fail(ErrorKind::NumericalFailure, "MLE did not find a feasible point");
    MleResult res;
    Vec6 l = best.l.normalized();
    // canonical gauge: nonnegative diagonal entries
    if (l(0) < 0) l(0) = -l(0), l(1) = -l(1);
    if (l(2) < 0) l(2) = -l(2);
    if (l(3) < 0) l(3) = -l(3), l(4) = -l(4);
    if (l(5) < 0) l(5) = -l(5);
    for (int i = 0; i < 6; ++i) res.params[i] = l(i);
    res.chi = chi_raw(res.params);
    res.neg_log_likelihood = best.f;
    res.grad_norm = best.grad;
    res.iterations = best.iters;
    return res;
}

MleResult mle_fit(const CountRecord& counts, const MleOptions& opt) { return mle_fit(frequencies(counts), opt); }

double process_gate_error(const Mat4& chi_full, const Mat2& target) {
    Eigen::Vector4cd u;
    for (int a = 0; a < 4; ++a) u(a) = (pauli(a) * target).trace() / 2.0;
    const double fpro = (u.adjoint() * chi_full * u)(0, 0).real();
    return 1.0 - (2.0 * fpro + 1.0) / 3.0;
}

// ---------------------------------------------------------------------------

namespace {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / M_SQRT2); }

double log_mass(double x, double w, double lo, double hi) {
    const double z = normal_cdf((hi - x) / w) - normal_cdf((lo - x) / w);
    return std::log(std::max(z, 1e-300));
}

double truncated_normal(double x, double w, double lo, double hi, Rng& rng) {
    for (int k = 0; k < 10000; ++k) {
        const double y = x + w * unit_normal(rng);
        if (y >= lo && y <= hi) return y;
    }
    return lo + (hi - lo) * unit_uniform(rng);
}

}  // namespace

MhChain mh_sample(const std::function<double(const std::vector<double>&)>& log_target, std::vector<double> x0,
                  const std::vector<double>& lo, const std::vector<double>& hi, const MhOptions& opt) {
    const std::size_t d = x0.size();
    require(d > 0 && lo.size() == d && hi.size() == d, "MH box dimension mismatch");
    for (std::size_t i = 0; i < d; ++i) {
        require(hi[i] > lo[i], "MH box must have hi > lo");
        x0[i] = std::clamp(x0[i], lo[i], hi[i]);
    }
    Rng rng = make_stream(opt.seed, 0, 0);
    std::vector<double> w(d, opt.initial_width), x = x0, y(d);
    double lp = log_target(x);
    if (!std::isfinite(lp)) fail(ErrorKind::NumericalFailure, "MH start point has zero likelihood");
    const std::size_t burn = static_cast<std::size_t>(opt.burn_in_fraction * static_cast<double>(opt.steps));
    MhChain chain;
    chain.samples.reserve(opt.steps - burn);
    std::size_t acc_window = 0, window = 0, acc_after = 0;
    for (std::size_t step = 0; step < opt.steps; ++step) {
        double log_q = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            y[i] = truncated_normal(x[i], w[i], lo[i], hi[i], rng);
            log_q += log_mass(x[i], w[i], lo[i], hi[i]) - log_mass(y[i], w[i], lo[i], hi[i]);
        }
        const double ly = log_target(y);
        bool accept = false;
        if (std::isfinite(ly)) {
            const double a = ly - lp + log_q;
            accept = a >= 0.0 || std::log(unit_uniform(rng)) < a;
        }
        if (accept) {
            x = y;
            lp = ly;
        }
        if (step < burn) {
            acc_window += accept;
            if (++window == 200) {
                const double rate = static_cast<double>(acc_window) / 200.0;
                const double f = std::exp(rate - opt.target_acceptance);
                for (std::size_t i = 0; i < d; ++i) w[i] = std::clamp(w[i] * f, 1e-6, hi[i] - lo[i]);
                acc_window = window = 0;
            }
        } else {
            acc_after += accept;
            chain.samples.push_back(x);
        }
    }
    chain.widths = w;
    chain.acceptance = chain.samples.empty() ? 0.0 : static_cast<double>(acc_after) / chain.samples.size();
    if (chain.acceptance < 0.1 || chain.acceptance > 0.6)
        spdlog::warn("MH acceptance {:.3f} outside [0.1, 0.6]; proposal widths need tuning", chain.acceptance);
    return chain;
}

double quantile(std::vector<double> v, double q) {
    require(!v.empty(), "quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + frac * (v[i + 1] - v[i]);
}

double histogram_mode(const std::vector<double>& v, int bins) {
    require(!v.empty() && bins > 0, "mode of empty sample");
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    if (*mx == *mn) return *mn;
    std::vector<long> h(bins, 0);
    const double width = (*mx - *mn) / bins;
    for (double x : v) ++h[std::min(bins - 1, static_cast<int>((x - *mn) / width))];
    const int k = static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
    return *mn + (k + 0.5) * width;
}

ChiPosterior mh_chain(const CountRecord& counts, const Mat2& target, const MhOptions& opt, const CholParams* start,
                      double q_lo, double q_hi) {
    const ProbTable n = count_table(counts);
    check_counts(counts);
    CholParams l0 = start ? *start : mle_fit(counts).params;
    std::vector<double> x0(l0.begin(), l0.end());
    const std::vector<double> lo = {0, -1, 0, 0, -1, 0}, hi = {1, 1, 1, 1, 1, 1};
    for (int i : {0, 2, 3, 5}) x0[i] = std::abs(x0[i]);
    auto logt = [&](const std::vector<double>& x) {
        CholParams l;
        std::copy(x.begin(), x.end(), l.begin());
        if (norm2(l) == 0.0) return -std::numeric_limits<double>::infinity();
        const double v = log_likelihood(l, n);
        return v <= -1e299 ? -std::numeric_limits<double>::infinity() : v;
    };
    const MhChain ch = mh_sample(logt, x0, lo, hi, opt);
    ChiPosterior post;
    post.acceptance = ch.acceptance;
    post.widths = ch.widths;
    for (const auto& x : ch.samples) {
        CholParams l;
        std::copy(x.begin(), x.end(), l.begin());
        l = normalize(l);
        post.chain.push_back(l);
        post.gate_error.push_back(process_gate_error(chi_raw(l), target));
    }
    double sum = 0.0;
    for (double e : post.gate_error) sum += e;
    post.mean = sum / static_cast<double>(post.gate_error.size());
    post.mode = histogram_mode(post.gate_error);
    post.q_lo = quantile(post.gate_error, q_lo);
    post.q_hi = quantile(post.gate_error, q_hi);
    return post;
}

nlohmann::json posterior_json(const ChiPosterior& post) {
    CholParams mean{};
    for (const auto& l : post.chain)
        for (int i = 0; i < 6; ++i) mean[i] += l[i] / static_cast<double>(post.chain.size());
    return {{"gate_error", {{"mode", post.mode}, {"mean", post.mean}, {"q025", post.q_lo}, {"q975", post.q_hi}}},
            {"chain", {{"samples", post.chain.size()}, {"acceptance", post.acceptance}, {"proposal_widths", post.widths},
                       {"mean_params", mean}}}};
}

}  // namespace qnoise
