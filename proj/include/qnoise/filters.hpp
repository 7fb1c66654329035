#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnoise/psd.hpp"

namespace qnoise {

// Filter functions; all parity-even in omega. Gamma_i = int dw S(w) F_i(w, t).
double filter_gamma1(double omega, double Omega, double t);
double filter_delta1(double omega, double Omega, double t);
double filter_gamma2(double omega, double Omega, double t);
double filter_delta2(double omega, double Omega, double t);
double filter_amplitude(double omega, double t);

// Filtered integrals at one time
struct FiPoint {
    double t = 0.0;
    double G1 = 0.0, G2 = 0.0, D1 = 0.0, D2 = 0.0;
    double DG1 = 0.0;  // amplitude-noise decay, 0 without amplitude noise
};

struct FilteredIntegrals {
    std::vector<double> t, gamma1, gamma2, delta1, delta2, dgamma1;
    bool has_amplitude = false;

    std::size_t size() const { return t.size(); }
    FiPoint at(std::size_t i) const;
    void push_back(const FiPoint& p);
};

struct QuadratureOptions {
    double epsrel = 1e-10;
    double epsabs_scale = 1e-13;  // times max(S) * t
};

// Frequency-domain quadrature of the five filtered integrals.
FilteredIntegrals filtered_integrals(const NoisePsd& psd, const NoisePsd* amp_psd, double Omega,
                                     const std::vector<double>& times, const QuadratureOptions& opt = {});
FiPoint filtered_integrals_at(const NoisePsd& psd, const NoisePsd* amp_psd, double Omega, double t,
                              const QuadratureOptions& opt = {});

// Closed forms for OU dephasing noise (and OU amplitude noise for DG1)
FiPoint ou_filtered_point(double c, double tau_c, double Omega, double t,
                          std::optional<std::pair<double, double>> amp_ou = std::nullopt);
FilteredIntegrals ou_filtered_integrals(double c, double tau_c, double Omega, const std::vector<double>& times,
                                        std::optional<std::pair<double, double>> amp_ou = std::nullopt);

using Autocov = std::function<double(double)>;

// Time-domain path: nested quadrature of the kernels gamma_i, delta_i, then cumulative
// integration along the time grid (times must be nondecreasing).
FilteredIntegrals filtered_integrals_timedomain(const Autocov& autocov, double Omega,
                                                const std::vector<double>& times,
                                                const Autocov* amp_autocov = nullptr,
                                                double correlation_time = 0.0);

// Instantaneous kernels at time s (positive-sign convention)
struct Kernels {
    double g1 = 0.0, g2 = 0.0, d1 = 0.0, d2 = 0.0, dg1 = 0.0;
};
Kernels ou_kernels(double c, double tau_c, double Omega, double s);
Kernels kernels_timedomain(const Autocov& autocov, double Omega, double s, double correlation_time = 0.0);

void write_filtered_integrals_csv(const FilteredIntegrals& fi, const std::string& path);

}  // namespace qnoise
