#include "qnoise/filters.hpp"

#include <gsl/gsl_errno.h>
#include <fmt/format.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <numbers>

#include "qnoise/error.hpp"
#include "qnoise/parallel.hpp"

namespace qnoise {

namespace {

constexpr double pi = std::numbers::pi;

// sin(x t / 2) / x, the building block of every filter
double hfun(double x, double t) {
    const double y = 0.5 * x * t;
    if (std::abs(y) < 1e-4) {
        const double y2 = y * y;
        return 0.5 * t * (1.0 - y2 / 6.0 + y2 * y2 / 120.0);
    }
    return std::sin(y) / x;
}

// (sin(x t) - x t) / x^2
double gfun(double x, double t) {
    const double y = x * t;
    if (std::abs(y) < 0.1) {
        const double y2 = y * y;
        return t * t * y * (-1.0 / 6.0 + y2 * (1.0 / 120.0 + y2 * (-1.0 / 5040.0 + y2 / 362880.0)));
    }
    return (std::sin(y) - y) / (x * x);
}

void quiet_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

template <class F>
double trampoline(double x, void* p) {
    return (*static_cast<F*>(p))(x);
}

template <class F>
gsl_function make_fn(F& f) {
    gsl_function g;
    g.function = &trampoline<F>;
    g.params = &f;
    return g;
}

struct WsDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};
using Workspace = std::unique_ptr<gsl_integration_workspace, WsDeleter>;

struct TableDeleter {
    void operator()(gsl_integration_qawo_table* w) const { gsl_integration_qawo_table_free(w); }
};

enum class Filter { G1, D1, G2, D2, Amp };

const char* filter_name(Filter f) {
    switch (f) {
        case Filter::G1: return "Gamma1";
        case Filter::D1: return "Delta1";
        case Filter::G2: return "Gamma2";
        case Filter::D2: return "Delta2";
        case Filter::Amp: return "DeltaGamma1";
    }
    return "?";
}

double filter_value(Filter f, double w, double Omega, double t) {
    switch (f) {
        case Filter::G1: return filter_gamma1(w, Omega, t);
        case Filter::D1: return filter_delta1(w, Omega, t);
        case Filter::G2: return filter_gamma2(w, Omega, t);
        case Filter::D2: return filter_delta2(w, Omega, t);
        case Filter::Amp: return filter_amplitude(w, t);
    }
    return 0.0;
}

// For w above the cutoff each filter is split as A(w) + B(w) cos(wt) + C(w) sin(wt)
struct TailParts {
    double nonosc, cos_coef, sin_coef;
};

TailParts filter_tail(Filter f, double w, double Omega, double t) {
    const double xm = w - Omega, xp = w + Omega;
    const double im2 = 1.0 / (xm * xm), ip2 = 1.0 / (xp * xp);
    const double cO = std::cos(Omega * t), sO = std::sin(Omega * t);
    switch (f) {
        case Filter::G1:
            return {(im2 + ip2) / (4 * pi), -cO * (im2 + ip2) / (4 * pi), -sO * (im2 - ip2) / (4 * pi)};
        case Filter::D1:
            return {t * (-1.0 / xm + 1.0 / xp) / (4 * pi), -sO * (im2 + ip2) / (4 * pi), cO * (im2 - ip2) / (4 * pi)};
        case Filter::G2: {
            const double d = 1.0 / (2 * pi * xm * xp);
            return {cO * cO * d, -cO * d, 0.0};
        }
        case Filter::D2: {
            const double d = 1.0 / (2 * pi * xm * xp);
            return {sO * cO * d, -sO * d, 0.0};
        }
        case Filter::Amp: {
            const double d = 1.0 / (pi * w * w);
            return {d, -d, 0.0};
        }
    }
    return {0, 0, 0};
}

double psd_max(const NoisePsd& psd) {
    if (psd.kind() == NoisePsd::Kind::OrnsteinUhlenbeck) return psd.c() * psd.tau_c() * psd.tau_c();
    double m = std::max(psd.low_plateau(), psd.high_plateau());
    for (double v : psd.density()) m = std::max(m, v);
    return m;
}

[[noreturn]] void quad_failure(Filter f, double Omega, double t, int status, double result, double abserr,
                               const char* where) {
    fail(ErrorKind::NumericalFailure,
         std::string("quadrature for ") + filter_name(f) + " did not converge (" + where + ", Omega=" +
             fmt::format("{:.6g}, t={:.6g}, status=", Omega, t) + gsl_strerror(status) +
             fmt::format(", result={:.6g}, abserr={:.3g})", result, abserr));
}

bool acceptable(int status, double result, double abserr, double epsabs) {
    if (status == GSL_SUCCESS) return true;
    return abserr <= std::max(10.0 * epsabs, 1e-8 * std::abs(result));
}

// int_{-inf}^{inf} dw S(w) F(w, t)
double integrate_filter(const NoisePsd& psd, Filter f, double Omega, double t, const QuadratureOptions& opt) {
    if (t <= 0.0 || psd.is_zero()) return 0.0;
    quiet_gsl();
    const double smax = psd_max(psd);
    const double epsabs = opt.epsabs_scale * smax * t;

    // kinks of the density: breakpoints and excluded-band edges
    std::vector<double> kinks = psd.breakpoints();
    for (const auto& band : psd.excluded()) kinks.insert(kinks.end(), {band.lo, band.hi});

    // body [0, Wb]: panels one filter period wide around the peak
    const double Wb = 2.0 * Omega + 8.0 * pi / t;
    std::vector<double> edges;
    double step = 2.0 * pi / t;
    if (Wb / step > 1e5) step = Wb / 1e5;
    for (double w = 0.0; w < Wb; w += step) edges.push_back(w);
    edges.push_back(Wb);
    if (Omega > 0.0 && Omega < Wb) edges.push_back(Omega);
    for (double k : kinks)
        if (k > 0.0 && k < Wb) edges.push_back(k);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [Wb](double a, double b) { return std::abs(a - b) <= 1e-14 * Wb; }),
                edges.end());

    const std::size_t limit = 200;
    Workspace ws(gsl_integration_workspace_alloc(limit));
    auto body = [&](double w) { return psd(w) * filter_value(f, w, Omega, t); };
    gsl_function gbody = make_fn(body);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double r = 0.0, e = 0.0;
        const int st = gsl_integration_qag(&gbody, edges[i], edges[i + 1], epsabs / static_cast<double>(edges.size()),
                                           opt.epsrel, limit, GSL_INTEG_GAUSS21, ws.get(), &r, &e);
        // judged against the whole-integral tolerance: panels far from the filter peak are tiny
        if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "body");
        total += r;
    }

    // beyond Wb the filter splits exactly into a smooth part plus cos(wt), sin(wt) terms
    const bool has_sin = f == Filter::G1 || f == Filter::D1;
    std::vector<double> mid = {Wb};
    for (double k : kinks)
        if (k > Wb) mid.push_back(k);
    std::sort(mid.begin(), mid.end());
    mid.erase(std::unique(mid.begin(), mid.end()), mid.end());

    auto nonosc = [&](double w) { return psd(w) * filter_tail(f, w, Omega, t).nonosc; };
    auto ccoef = [&](double w) { return psd(w) * filter_tail(f, w, Omega, t).cos_coef; };
    auto scoef = [&](double w) { return psd(w) * filter_tail(f, w, Omega, t).sin_coef; };
    gsl_function gn = make_fn(nonosc), gc = make_fn(ccoef), gs = make_fn(scoef);
    const double seg_abs = epsabs / static_cast<double>(mid.size());
    std::unique_ptr<gsl_integration_qawo_table, TableDeleter> ctab(
        gsl_integration_qawo_table_alloc(t, 1.0, GSL_INTEG_COSINE, 50));
    std::unique_ptr<gsl_integration_qawo_table, TableDeleter> stab(
        gsl_integration_qawo_table_alloc(t, 1.0, GSL_INTEG_SINE, 50));
    for (std::size_t i = 0; i + 1 < mid.size(); ++i) {
        const double a = mid[i], L = mid[i + 1] - mid[i];
        double r = 0.0, e = 0.0;
        int st = gsl_integration_qag(&gn, a, a + L, seg_abs, opt.epsrel, limit, GSL_INTEG_GAUSS21, ws.get(), &r, &e);
        if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "middle");
        total += r;
        gsl_integration_qawo_table_set_length(ctab.get(), L);
        st = gsl_integration_qawo(&gc, a, seg_abs, opt.epsrel, limit, ws.get(), ctab.get(), &r, &e);
        if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "middle cosine");
        total += r;
        if (has_sin) {
            gsl_integration_qawo_table_set_length(stab.get(), L);
            st = gsl_integration_qawo(&gs, a, seg_abs, opt.epsrel, limit, ws.get(), stab.get(), &r, &e);
            if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "middle sine");
            total += r;
        }
    }

    // tail [W, inf) in the scaled variable u = w / W: smooth part by qagiu,
    // oscillatory parts by qawf at angular frequency t W
    const double W = mid.back();
    auto nonosc_u = [&](double u) { return W * nonosc(W * u); };
    auto ccoef_u = [&](double u) { return W * ccoef(W * u); };
    auto scoef_u = [&](double u) { return W * scoef(W * u); };
    {
        gsl_function g = make_fn(nonosc_u);
        double r = 0.0, e = 0.0;
        const int st = gsl_integration_qagiu(&g, 1.0, epsabs, opt.epsrel, limit, ws.get(), &r, &e);
        if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "tail");
        total += r;
    }
    Workspace cyc(gsl_integration_workspace_alloc(limit));
    auto oscillatory = [&](auto& fn, enum gsl_integration_qawo_enum kind) {
        std::unique_ptr<gsl_integration_qawo_table, TableDeleter> tab(
            gsl_integration_qawo_table_alloc(t * W, 1.0, kind, 50));
        gsl_function g = make_fn(fn);
        double r = 0.0, e = 0.0;
        const int st = gsl_integration_qawf(&g, 1.0, epsabs, limit, ws.get(), cyc.get(), tab.get(), &r, &e);
        if (!acceptable(st, r, e, epsabs)) quad_failure(f, Omega, t, st, r, e, "oscillatory tail");
        return r;
    };
    total += oscillatory(ccoef_u, GSL_INTEG_COSINE);
    if (has_sin) total += oscillatory(scoef_u, GSL_INTEG_SINE);
    return 2.0 * total;
}

}  // namespace

double filter_gamma1(double omega, double Omega, double t) {
    const double a = hfun(omega - Omega, t), b = hfun(omega + Omega, t);
    return (a * a + b * b) / (2 * pi);
}

double filter_delta1(double omega, double Omega, double t) {
    return (gfun(omega - Omega, t) - gfun(omega + Omega, t)) / (4 * pi);
}

double filter_gamma2(double omega, double Omega, double t) {
    return std::cos(Omega * t) / pi * hfun(omega - Omega, t) * hfun(omega + Omega, t);
}

double filter_delta2(double omega, double Omega, double t) {
    return std::sin(Omega * t) / pi * hfun(omega - Omega, t) * hfun(omega + Omega, t);
}

double filter_amplitude(double omega, double t) {
    const double h = hfun(omega, t);
    return 2.0 / pi * h * h;
}

FiPoint FilteredIntegrals::at(std::size_t i) const {
    return {t.at(i), gamma1.at(i), gamma2.at(i), delta1.at(i), delta2.at(i), dgamma1.at(i)};
}

void FilteredIntegrals::push_back(const FiPoint& p) {
    t.push_back(p.t);
    gamma1.push_back(p.G1);
    gamma2.push_back(p.G2);
    delta1.push_back(p.D1);
    delta2.push_back(p.D2);
    dgamma1.push_back(p.DG1);
}

FiPoint filtered_integrals_at(const NoisePsd& psd, const NoisePsd* amp_psd, double Omega, double t,
                              const QuadratureOptions& opt) {
    require(t >= 0.0 && std::isfinite(t), "times must be >= 0");
    require(Omega >= 0.0 && std::isfinite(Omega), "Rabi frequency must be >= 0");
    FiPoint p;
    p.t = t;
    p.G1 = integrate_filter(psd, Filter::G1, Omega, t, opt);
    p.G2 = integrate_filter(psd, Filter::G2, Omega, t, opt);
    p.D1 = integrate_filter(psd, Filter::D1, Omega, t, opt);
    p.D2 = integrate_filter(psd, Filter::D2, Omega, t, opt);
    if (amp_psd) p.DG1 = integrate_filter(*amp_psd, Filter::Amp, Omega, t, opt);
    return p;
}

FilteredIntegrals filtered_integrals(const NoisePsd& psd, const NoisePsd* amp_psd, double Omega,
                                     const std::vector<double>& times, const QuadratureOptions& opt) {
    std::vector<FiPoint> pts(times.size());
    parallel_for(times.size(), [&](std::size_t i) { pts[i] = filtered_integrals_at(psd, amp_psd, Omega, times[i], opt); });
    FilteredIntegrals fi;
    fi.has_amplitude = amp_psd != nullptr;
    for (const auto& p : pts) fi.push_back(p);
    return fi;
}

// ---------------------------------------------------------------------------
// Ornstein-Uhlenbeck closed forms

FiPoint ou_filtered_point(double c, double tau, double Omega, double t,
                          std::optional<std::pair<double, double>> amp_ou) {
    FiPoint p;
    p.t = t;
    const double x = Omega * tau;
    const double S = c * tau * tau / (1.0 + x * x);
    const double e = std::exp(-t / tau);
    const double cO = std::cos(Omega * t), sO = std::sin(Omega * t);
    const double a = (1.0 - x * x) / (1.0 + x * x), b = 2.0 * x / (1.0 + x * x);
    p.G1 = 0.5 * S * (t - tau * b * e * sO - tau * a * (1.0 - e * cO));
    p.D1 = 0.5 * S * (t * x + tau * a * e * sO - tau * b * (1.0 - e * cO));
    // sin(Omega t)/Omega -> t as Omega -> 0
    const double sinc = Omega > 0.0 ? sO / Omega : t;
    const double R = 0.5 * S * (sinc - tau * cO + tau * e);
    p.G2 = cO * R;
    p.D2 = sO * R;
    if (amp_ou) {
        const auto [ca, ta] = *amp_ou;
        p.DG1 = ca * ta * ta * (t + ta * std::expm1(-t / ta));
    }
    return p;
}

FilteredIntegrals ou_filtered_integrals(double c, double tau_c, double Omega, const std::vector<double>& times,
                                        std::optional<std::pair<double, double>> amp_ou) {
    FilteredIntegrals fi;
    fi.has_amplitude = amp_ou.has_value();
    for (double t : times) fi.push_back(ou_filtered_point(c, tau_c, Omega, t, amp_ou));
    return fi;
}

Kernels ou_kernels(double c, double tau, double Omega, double s) {
    using C = std::complex<double>;
    const C q(1.0 / tau, -Omega);
    const C z = 0.5 * c * tau * (1.0 - std::exp(-q * s)) / q;
    const C w = std::exp(C(0.0, 2.0 * Omega * s)) * std::conj(z);
    return {z.real(), w.real(), z.imag(), w.imag(), 0.0};
}

// ---------------------------------------------------------------------------
// Time-domain path

namespace {

struct Inner {
    double c = 0.0, s = 0.0, zero = 0.0;  // int C cos(Om u), int C sin(Om u), int C_amp
};

class InnerIntegrator {
public:
    InnerIntegrator(const Autocov& C, double Omega, const Autocov* amp)
        : C_(C), Om_(Omega), amp_(amp), ws_(gsl_integration_workspace_alloc(200)) {}

    double integrate(const std::function<double(double)>& f, double a, double b, double scale) {
        if (b <= a) return 0.0;
        auto fn = [&](double u) { return f(u); };
        gsl_function g = make_fn(fn);
        double r = 0.0, e = 0.0;
        const double epsabs = 1e-15 * scale * (b - a);
        const int st = gsl_integration_qag(&g, a, b, epsabs, 1e-12, 200, GSL_INTEG_GAUSS21, ws_.get(), &r, &e);
        if (!acceptable(st, r, e, epsabs))
            fail(ErrorKind::NumericalFailure, std::string("time-domain kernel quadrature failed: ") + gsl_strerror(st));
        return r;
    }

    // increments over [a, b]
    Inner over(double a, double b) {
        Inner in;
        const double scale = std::abs(C_(0.0));
        in.c = integrate([&](double u) { return C_(u) * std::cos(Om_ * u); }, a, b, scale);
        in.s = integrate([&](double u) { return C_(u) * std::sin(Om_ * u); }, a, b, scale);
        if (amp_) in.zero = integrate([&](double u) { return (*amp_)(u); }, a, b, std::abs((*amp_)(0.0)));
        return in;
    }

private:
    const Autocov& C_;
    double Om_;
    const Autocov* amp_;
    Workspace ws_;
};

double panel_width(double Omega, double correlation_time) {
    double h = std::numeric_limits<double>::infinity();
    if (Omega > 0.0) h = 0.5 * pi / Omega;
    if (correlation_time > 0.0) h = std::min(h, 0.5 * correlation_time);
    return h;
}

}  // namespace

Kernels kernels_timedomain(const Autocov& autocov, double Omega, double s, double correlation_time) {
    require(s >= 0.0, "kernel time must be >= 0");
    quiet_gsl();
    InnerIntegrator inner(autocov, Omega, nullptr);
    double h = panel_width(Omega, correlation_time);
    if (!std::isfinite(h)) h = s;
    Inner acc;
    for (double a = 0.0; a < s; a += h) {
        const Inner d = inner.over(a, std::min(s, a + h));
        acc.c += d.c;
        acc.s += d.s;
    }
    const double c2 = std::cos(2.0 * Omega * s), s2 = std::sin(2.0 * Omega * s);
    return {acc.c, c2 * acc.c + s2 * acc.s, acc.s, s2 * acc.c - c2 * acc.s, 0.0};
}

FilteredIntegrals filtered_integrals_timedomain(const Autocov& autocov, double Omega, const std::vector<double>& times,
                                                const Autocov* amp_autocov, double correlation_time) {
    quiet_gsl();
    for (std::size_t i = 0; i < times.size(); ++i) {
        require(times[i] >= 0.0, "times must be >= 0");
        if (i > 0) require(times[i] >= times[i - 1], "time-domain path needs a nondecreasing time grid");
    }
    FilteredIntegrals fi;
    fi.has_amplitude = amp_autocov != nullptr;
    if (times.empty()) return fi;

    InnerIntegrator inner(autocov, Omega, amp_autocov);
    gsl_integration_glfixed_table* gl = gsl_integration_glfixed_table_alloc(20);
    std::vector<double> nodes(20), weights(20);
    for (std::size_t k = 0; k < 20; ++k) gsl_integration_glfixed_point(0.0, 1.0, k, &nodes[k], &weights[k], gl);
    gsl_integration_glfixed_table_free(gl);

    const double h = panel_width(Omega, correlation_time);
    Inner run;  // kernels' inner integrals at the current position
    FiPoint acc;
    double pos = 0.0;
    for (double T : times) {
        const double hseg = std::isfinite(h) ? h : std::max(T - pos, 1e-300) / 16.0;
        while (pos < T) {
            const double b = std::min(T, pos + hseg);
            const double len = b - pos;
            // outer Gauss-Legendre nodes; inner integrals accumulated from the panel start
            double last = pos;
            Inner at = run;
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const double s = pos + nodes[k] * len;
                const Inner d = inner.over(last, s);
                at.c += d.c;
                at.s += d.s;
                at.zero += d.zero;
                last = s;
                const double c2 = std::cos(2.0 * Omega * s), s2 = std::sin(2.0 * Omega * s);
                const double wgt = weights[k] * len;
                acc.G1 += wgt * at.c;
                acc.D1 += wgt * at.s;
                acc.G2 += wgt * (c2 * at.c + s2 * at.s);
                acc.D2 += wgt * (s2 * at.c - c2 * at.s);
                acc.DG1 += wgt * 2.0 * at.zero;
            }
            const Inner d = inner.over(last, b);
            run.c = at.c + d.c;
            run.s = at.s + d.s;
            run.zero = at.zero + d.zero;
            pos = b;
        }
        FiPoint p = acc;
        p.t = T;
        fi.push_back(p);
    }
    return fi;
}

void write_filtered_integrals_csv(const FilteredIntegrals& fi, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
    out << "t,gamma1,gamma2,delta1,delta2,dgamma1\n" << std::setprecision(17);
    for (std::size_t i = 0; i < fi.size(); ++i)
        out << fi.t[i] << ',' << fi.gamma1[i] << ',' << fi.gamma2[i] << ',' << fi.delta1[i] << ','
            << fi.delta2[i] << ',' << fi.dgamma1[i] << '\n';
}

}  // namespace qnoise
