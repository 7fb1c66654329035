#pragma once

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qnoise/errormap.hpp"
#include "qnoise/psd.hpp"
#include "qnoise/quantum.hpp"

namespace qnoise {

// A drive pulse: rotation by quarters * pi/2 about (cos phi, sin phi, 0)
struct Pulse {
    double phi = 0.0;
    int quarters = 1;
};

struct Clifford {
    std::vector<Pulse> pulses;  // time order
    Mat2 U;                     // ideal unitary
    int quarter_count() const;
};

// 24 single-qubit Cliffords as +-X/2, +-Y/2, X, Y pulse sequences
const std::vector<Clifford>& clifford_table();
double mean_pulses_per_clifford();

// Error superoperator (applied after the ideal rotation) of an x-axis pulse of the given angle.
// Pulses about other axes use the same channel conjugated by Rz(phi).
using PulseErrorFn = std::function<Mat4(double angle)>;

// depolarizing with probability p per pi/2 pulse, composed multiplicatively for longer pulses
PulseErrorFn depolarizing_pulse_error(double p_quarter);
// analytic non-Markovian error channel at t = angle / Omega, optionally Pauli-twirled
PulseErrorFn nm_pulse_error(const NoisePsd& psd, double Omega, bool twirl);

// lambda = mean over the table of f^{quarters}, f = 1 - 4p/3
double rb_depolarizing_lambda(double p_quarter);

struct RbOptions {
    std::vector<std::size_t> lengths;  // empty: 1, 2, 4, ..., 1024
    std::size_t n_seq = 100;
    long shots = 100;  // <= 0 means exact survival probabilities
    std::uint64_t seed = 1;
};

struct RbResult {
    std::vector<std::size_t> lengths;
    std::vector<double> survival_mean, survival_se;
    double A = 0.0, B = 0.0, lambda = 1.0, lambda_se = 0.0;
    double r = 0.0;               // average Clifford error (1 - lambda)(d - 1)/d
    double eps_rb_literal = 0.0;  // 4(d-1) lambda / (3d) + 1/d as printed
    double pulse_proxy = 0.0;     // r / 2.2
};

// Throws FitError when the survival curve does not decay.
RbResult rb_simulate(const PulseErrorFn& error, const RbOptions& opt = {});
// fills A, B, lambda, lambda_se from lengths and survival_mean
void fit_rb_decay(RbResult& res);

void write_rb_csv(const RbResult& res, const std::string& path);
nlohmann::json rb_json(const RbResult& res);

}  // namespace qnoise
