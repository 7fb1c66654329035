#include "qnoise/errormap.hpp"

#include <spdlog/spdlog.h>

#include <cmath>

#include "qnoise/error.hpp"

namespace qnoise {

RotationSpec rotation_spec(const FiPoint& fi) {
    RotationSpec r;
    r.theta2 = fi.D1 * fi.D1 - fi.D2 * fi.D2 - fi.G2 * fi.G2;
    r.Theta = std::sqrt(cplx(r.theta2, 0.0));
    if (std::abs(r.Theta) > 0.0) {
        r.n = {cplx(fi.D1) / r.Theta, cplx(0.0, -fi.D2) / r.Theta, cplx(0.0, fi.G2) / r.Theta};
    } else {
        r.n = {cplx(1.0), cplx(0.0), cplx(0.0)};
    }
    return r;
}

HalfAngle half_angle(double theta2) {
    if (std::abs(theta2) < 1e-4) {
        return {1.0 - theta2 / 8.0 + theta2 * theta2 / 384.0, 0.5 - theta2 / 48.0 + theta2 * theta2 / 3840.0};
    }
    if (theta2 > 0.0) {
        const double th = std::sqrt(theta2);
        return {std::cos(0.5 * th), std::sin(0.5 * th) / th};
    }
    const double th = std::sqrt(-theta2);
    return {std::cosh(0.5 * th), std::sinh(0.5 * th) / th};
}

namespace {

double coherence_factor(const FiPoint& fi, bool with_amplitude) {
    return std::exp(-0.5 * (fi.G1 + (with_amplitude ? fi.DG1 : 0.0)));
}

}  // namespace

RMat4 error_ptm(const FiPoint& fi, bool with_amplitude) {
    const auto [c, s] = half_angle(rotation_spec(fi).theta2);
    const double e = coherence_factor(fi, with_amplitude);
    RMat4 R = RMat4::Zero();
    R(0, 0) = 1.0;
    R(1, 1) = std::exp(-fi.G1);
    R(2, 2) = e * (c - s * fi.G2);
    R(3, 2) = e * s * (fi.D1 - fi.D2);
    R(3, 3) = e * (c + s * fi.G2);
    R(2, 3) = -e * s * (fi.D1 + fi.D2);
    return R;
}

DensityMatrix dressed_evolve(const DensityMatrix& rho0, const FiPoint& fi, double Omega, bool with_amplitude) {
    // dressed populations live on sx, dressed coherences on (sy, sz)
    const Mat2 U = drive_unitary(Omega, 0.0, fi.t);
    const Mat2 ideal = U * rho0 * U.adjoint();
    const RMat4 R = error_ptm(fi, with_amplitude);
    Eigen::Vector4d v;
    v(0) = ideal.trace().real();
    v.tail<3>() = bloch(ideal);
    const Eigen::Vector4d out = R * v;
    Mat2 rho = 0.5 * out(0) * Mat2::Identity();
    for (int k = 1; k < 4; ++k) rho += 0.5 * out(k) * pauli(k);
    return rho;
}

KrausSet kraus_nc(const FiPoint& fi, double Omega, bool with_amplitude) {
    if (!(fi.G1 >= -1e-12) || !std::isfinite(fi.G1))
        fail(ErrorKind::NumericalFailure, "Gamma1 = " + std::to_string(fi.G1) + " gives error rate outside [0,1]");
    const double G1 = std::max(0.0, fi.G1);
    const double eps = -std::expm1(-G1);
    const double wt = Omega * fi.t;
    const double cw = std::cos(wt), sw = std::sin(wt);
    const Mat2 rot = rx(0.5 * fi.D1);  // exp(-i D1 sx / 4)
    KrausSet k;
    k.t = fi.t;
    if (!with_amplitude) {
        const Vec2 plus(M_SQRT1_2, M_SQRT1_2), minus(M_SQRT1_2, -M_SQRT1_2);
        const Mat2 pm = plus * minus.adjoint(), mp = minus * plus.adjoint();
        const Mat2 pp = plus * plus.adjoint(), mm = minus * minus.adjoint();
        const double a = std::sqrt(0.5 * eps);
        k.ops.push_back(a * (cw * pm + I_unit * sw * mp));
        k.ops.push_back(a * (cw * mp + I_unit * sw * pm));
        k.ops.push_back(M_SQRT1_2 * rot * (std::sqrt(1.0 - eps) * mm + pp));
        k.ops.push_back(M_SQRT1_2 * rot * (std::sqrt(1.0 - eps) * pp + mm));
    } else {
        const double e1 = std::exp(-G1), ea = coherence_factor(fi, true);
        const double xi_m = std::max(0.0, 1.0 + e1 - 2.0 * ea), xi_p = 1.0 + e1 + 2.0 * ea;
        const double a = 0.5 * std::sqrt(eps);
        k.ops.push_back(a * (sw * pauli(3) + cw * pauli(2)));
        k.ops.push_back(a * (cw * pauli(3) - sw * pauli(2)));
        k.ops.push_back(0.5 * std::sqrt(xi_m) * pauli(1) * rot);
        k.ops.push_back(0.5 * std::sqrt(xi_p) * rot);
    }
    return k;
}

ProcessMatrix chi_nm(const FiPoint& fi, bool with_amplitude) {
    const auto [c, s] = half_angle(rotation_spec(fi).theta2);
    const double e = coherence_factor(fi, with_amplitude);
    const double e1 = std::exp(-fi.G1);
    ProcessMatrix p;
    p.t = fi.t;
    Mat4& x = p.chi;
    // block A on {I, sx}
    x(0, 0) = 0.25 * (1.0 + e1 + 2.0 * c * e);
    x(1, 1) = 0.25 * (1.0 + e1 - 2.0 * c * e);
    x(0, 1) = cplx(0.0, 0.5 * fi.D1 * s * e);
    x(1, 0) = std::conj(x(0, 1));
    // block B on {sy, sz}
    x(2, 2) = 0.25 * (1.0 - e1 - 2.0 * fi.G2 * s * e);
    x(3, 3) = 0.25 * (1.0 - e1 + 2.0 * fi.G2 * s * e);
    x(2, 3) = x(3, 2) = -0.5 * fi.D2 * s * e;
    return p;
}

ProcessMatrix chi_nm_checked(const FiPoint& fi, bool with_amplitude) {
    ProcessMatrix p = chi_nm(fi, with_amplitude);
    const double lmin = min_eigenvalue(p.chi);
    if (lmin < -1e-8)
        fail(ErrorKind::CpViolation, "chi has eigenvalue " + std::to_string(lmin) + " at t=" + std::to_string(fi.t) +
                                         " (outside the weak-coupling validity regime)");
    return p;
}

PauliRates pauli_twirl(const FiPoint& fi, bool with_amplitude) {
    const Mat4 chi = chi_nm(fi, with_amplitude).chi;
    return {chi(1, 1).real(), chi(2, 2).real(), chi(3, 3).real()};
}

ProcessMatrix pauli_channel(const PauliRates& r, double t) {
    ProcessMatrix p;
    p.t = t;
    p.chi(0, 0) = 1.0 - r.p();
    p.chi(1, 1) = r.px;
    p.chi(2, 2) = r.py;
    p.chi(3, 3) = r.pz;
    return p;
}

PauliRates twirl_chi(const Mat4& chi) {
    const Mat4 S = chi_to_superop(chi);
    Mat4 acc = Mat4::Zero();
    for (int k = 0; k < 4; ++k) {
        const Mat4 P = unitary_superop(pauli(k));
        acc += P * S * P;
    }
    const Mat4 tw = superop_to_chi(0.25 * acc);
    return {tw(1, 1).real(), tw(2, 2).real(), tw(3, 3).real()};
}

double depolarizing_rate(const FiPoint& fi) { return 0.75 * -std::expm1(-fi.G1); }

ProcessMatrix depolarizing_channel(double p_d, double t) { return pauli_channel({p_d / 3, p_d / 3, p_d / 3}, t); }

ErrorModel parse_error_model(const std::string& name) {
    if (name == "D") return ErrorModel::D;
    if (name == "NC") return ErrorModel::NC;
    if (name == "NM") return ErrorModel::NM;
    if (name == "NC_I") return ErrorModel::NC_I;
    if (name == "NM_I") return ErrorModel::NM_I;
    fail(ErrorKind::InvalidInput, "unknown error model '" + name + "'");
}

const char* to_string(ErrorModel m) {
    switch (m) {
        case ErrorModel::D: return "D";
        case ErrorModel::NC: return "NC";
        case ErrorModel::NM: return "NM";
        case ErrorModel::NC_I: return "NC_I";
        case ErrorModel::NM_I: return "NM_I";
    }
    return "?";
}

double gate_error(const FiPoint& fi, ErrorModel model) {
    const double e1 = std::exp(-fi.G1);
    switch (model) {
        case ErrorModel::D: return 0.5 * -std::expm1(-fi.G1);
        case ErrorModel::NC:
        case ErrorModel::NC_I: {
            const double e = coherence_factor(fi, model == ErrorModel::NC_I);
            return 0.5 - (e1 + 2.0 * e * std::cos(0.5 * fi.D1)) / 6.0;
        }
        case ErrorModel::NM:
        case ErrorModel::NM_I: {
            const double e = coherence_factor(fi, model == ErrorModel::NM_I);
            return 0.5 - (e1 + 2.0 * e * half_angle(rotation_spec(fi).theta2).c) / 6.0;
        }
    }
    return 0.0;
}

double error_channel_fidelity(const ProcessMatrix& chi) { return avg_gate_fidelity(chi, Mat2::Identity()); }

double error_channel_fidelity(const KrausSet& k) { return avg_gate_fidelity(k, Mat2::Identity()); }

double zeta_dress(const NoisePsd& psd, double Omega) {
    if (psd.kind() != NoisePsd::Kind::OrnsteinUhlenbeck) return std::nan("");
    const double S = psd(Omega);
    if (S <= 0.0) return 0.0;
    return std::sqrt(psd.tau_c() * S / 2.0);
}

double check_validity(const NoisePsd& psd, double Omega) {
    const double z = zeta_dress(psd, Omega);
    if (std::isfinite(z) && z > 0.3)
        spdlog::warn("zeta_dress = {:.3f} > 0.3: second-order cumulant truncation may be inaccurate", z);
    return z;
}

NmCurve nm_from_kernels(const std::vector<double>& t, const std::vector<Kernels>& k) {
    require(t.size() == k.size(), "kernel grid size mismatch");
    NmCurve out;
    out.t = t;
    out.n_cp.resize(t.size(), 0.0);
    out.gamma_minus.resize(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double g1 = k[i].g1 + k[i].dg1;
        out.gamma_minus[i] = 0.5 * g1 - 0.5 * std::hypot(k[i].g2, k[i].d2);
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double a = std::max(0.0, -out.gamma_minus[i - 1]), b = std::max(0.0, -out.gamma_minus[i]);
        out.n_cp[i] = out.n_cp[i - 1] + 0.5 * (a + b) * (t[i] - t[i - 1]);
    }
    return out;
}

NmCurve nm_measure(const NoisePsd& psd, double Omega, double t_max, std::size_t grid, const NoisePsd* amp_psd) {
    require(grid >= 3 && t_max > 0.0, "nm_measure needs t_max > 0 and at least 3 grid points");
    std::vector<double> t(grid);
    for (std::size_t i = 0; i < grid; ++i) t[i] = t_max * static_cast<double>(i) / static_cast<double>(grid - 1);
    std::vector<Kernels> k(grid);
    const bool closed = psd.kind() == NoisePsd::Kind::OrnsteinUhlenbeck &&
                        (!amp_psd || amp_psd->kind() == NoisePsd::Kind::OrnsteinUhlenbeck);
    if (closed) {
        for (std::size_t i = 0; i < grid; ++i) {
            k[i] = ou_kernels(psd.c(), psd.tau_c(), Omega, t[i]);
            if (amp_psd) {
                const double ta = amp_psd->tau_c();
                k[i].dg1 = amp_psd->c() * ta * ta * -std::expm1(-t[i] / ta);
            }
        }
        return nm_from_kernels(t, k);
    }
    // kernels as time derivatives of the filtered integrals: five-point stencil on a
    // sub-step of the grid, kernels vanish at t = 0
    const double hd = 1e-2 * (t[1] - t[0]);
    const double offs[4] = {-2 * hd, -hd, hd, 2 * hd};
    std::vector<double> ts;
    for (std::size_t i = 1; i < grid; ++i)
        for (double o : offs) ts.push_back(t[i] + o);
    const FilteredIntegrals fi = filtered_integrals(psd, amp_psd, Omega, ts);
    auto deriv = [&](const std::vector<double>& v, std::size_t i) {
        const std::size_t j = 4 * (i - 1);
        return (v[j] - 8.0 * v[j + 1] + 8.0 * v[j + 2] - v[j + 3]) / (12.0 * hd);
    };
    for (std::size_t i = 1; i < grid; ++i) {
        k[i].g1 = deriv(fi.gamma1, i);
        k[i].g2 = deriv(fi.gamma2, i);
        k[i].d1 = deriv(fi.delta1, i);
        k[i].d2 = deriv(fi.delta2, i);
        k[i].dg1 = amp_psd ? deriv(fi.dgamma1, i) : 0.0;
    }
    return nm_from_kernels(t, k);
}

nlohmann::json chi_to_json(const Mat4& chi) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json r = nlohmann::json::array(), m = nlohmann::json::array();
        for (int j = 0; j < 4; ++j) {
            r.push_back(chi(i, j).real());
            m.push_back(chi(i, j).imag());
        }
        re.push_back(r);
        im.push_back(m);
    }
    return {{"re", re}, {"im", im}};
}

nlohmann::json kraus_to_json(const KrausSet& k) {
    nlohmann::json ops = nlohmann::json::array();
    for (const auto& op : k.ops) {
        nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
        for (int i = 0; i < 2; ++i) {
            re.push_back({op(i, 0).real(), op(i, 1).real()});
            im.push_back({op(i, 0).imag(), op(i, 1).imag()});
        }
        ops.push_back({{"re", re}, {"im", im}});
    }
    return ops;
}

nlohmann::json snapshot_json(const FiPoint& fi, double Omega, bool with_amplitude) {
    const PauliRates r = pauli_twirl(fi, with_amplitude);
    nlohmann::json j;
    j["t"] = fi.t;
    j["integrals"] = {{"gamma1", fi.G1}, {"gamma2", fi.G2}, {"delta1", fi.D1}, {"delta2", fi.D2}, {"dgamma1", fi.DG1}};
    j["theta2"] = rotation_spec(fi).theta2;
    j["chi_nm"] = chi_to_json(chi_nm(fi, with_amplitude).chi);
    j["kraus_nc"] = kraus_to_json(kraus_nc(fi, Omega, with_amplitude));
    j["pauli_rates"] = {{"px", r.px}, {"py", r.py}, {"pz", r.pz}};
    j["p_depolarizing"] = depolarizing_rate(fi);
    nlohmann::json err;
    for (auto m : {ErrorModel::D, ErrorModel::NC, ErrorModel::NM, ErrorModel::NC_I, ErrorModel::NM_I})
        err[to_string(m)] = gate_error(fi, m);
    j["gate_error"] = err;
    return j;
}

}  // namespace qnoise
