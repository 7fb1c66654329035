#pragma once

#include <array>
#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qnoise/quantum.hpp"
#include "qnoise/rng.hpp"

namespace qnoise {

// 4 input states x 6 weighted POVM elements; mu = 2*b + (0 for +1, 1 for -1), b in {x, y, z}
inline constexpr int kStates = 4;
inline constexpr int kOutcomes = 6;
using ProbTable = std::array<std::array<double, kOutcomes>, kStates>;

struct TomographySetup {
    std::array<Mat2, kStates> states;      // |+><+|, |+i><+i|, |0><0|, |1><1|
    std::array<Mat2, kOutcomes> povm;      // (1/3)(I +- s_b)/2
    // p_{s,mu} = sum_ab chi_ab D[s][mu](a, b), D(a, b) = tr(M_mu s_a rho_s s_b)
    std::array<std::array<Mat4, kOutcomes>, kStates> D;
};
const TomographySetup& default_setup();

ProbTable born_probs(const Mat4& chi, const TomographySetup& setup = default_setup());

// least-squares inversion over the 16 real parameters of a Hermitian chi
Mat4 linear_inversion(const ProbTable& p, const TomographySetup& setup = default_setup());

struct CountRow {
    int state = 0;  // index into setup.states
    int basis = 0;  // 0 = x, 1 = y, 2 = z
    double time = 0.0;
    long n_plus = 0;
    long n_minus = 0;
};
// counts for one snapshot time
struct CountRecord {
    double time = 0.0;
    std::vector<CountRow> rows;
};

CountRecord sample_shots(const ProbTable& p, long shots_per_setting, Rng& rng, double time = 0.0);
// relative frequencies normalized per input state (comparable with born_probs)
ProbTable frequencies(const CountRecord& counts);
// raw outcome counts per (state, mu)
ProbTable count_table(const CountRecord& counts);
// throws degenerate-data when a (state, basis) setting is missing or has no shots
void check_counts(const CountRecord& counts);

std::vector<CountRecord> read_counts_csv(const std::string& path);
void write_counts_csv(const std::vector<CountRecord>& records, const std::string& path);

// Block-Cholesky parameters (l11, l12, l22, l33, l34, l44):
// L_A = [[l11, 0], [i l12, l22]] on {I, sx}, L_B = [[l33, 0], [l34, l44]] on {sy, sz}, sum l^2 = 1.
using CholParams = std::array<double, 6>;
Mat4 chi_from_cholesky(const CholParams& l);  // normalizes first
CholParams normalize(const CholParams& l);

// p_{s,mu}(l) = l^T Q[s][mu] l / l^T l
struct QuadraticModel {
    std::array<std::array<Eigen::Matrix<double, 6, 6>, kOutcomes>, kStates> Q;
};
const QuadraticModel& quadratic_model();
double log_likelihood(const CholParams& l, const ProbTable& weights);

struct MleOptions {
    int starts = 8;
    double grad_tol = 1e-9;
    int max_iter = 5000;
    std::uint64_t seed = 7;
};
struct MleResult {
    Mat4 chi;
    CholParams params{};
    double neg_log_likelihood = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
};
MleResult mle_fit(const CountRecord& counts, const MleOptions& opt = {});
MleResult mle_fit(const ProbTable& freqs, const MleOptions& opt = {});

// gate error 1 - F_avg of a full-process chi against a target unitary
double process_gate_error(const Mat4& chi_full, const Mat2& target);

// ---------------------------------------------------------------------------
// Metropolis-Hastings with truncated-Gaussian proposals on a box

struct MhOptions {
    std::size_t steps = 100000;
    double burn_in_fraction = 0.1;
    double initial_width = 0.02;
    double target_acceptance = 0.3;
    std::uint64_t seed = 11;
};

struct MhChain {
    std::vector<std::vector<double>> samples;  // post burn-in
    std::vector<double> widths;                // tuned proposal widths
    double acceptance = 0.0;                   // post burn-in
};

MhChain mh_sample(const std::function<double(const std::vector<double>&)>& log_target, std::vector<double> x0,
                  const std::vector<double>& lo, const std::vector<double>& hi, const MhOptions& opt);

struct ChiPosterior {
    std::vector<CholParams> chain;  // normalized
    std::vector<double> gate_error;
    double acceptance = 0.0;
    std::vector<double> widths;
    double mode = 0.0, mean = 0.0, q_lo = 0.0, q_hi = 0.0;
};

ChiPosterior mh_chain(const CountRecord& counts, const Mat2& target, const MhOptions& opt = {},
                      const CholParams* start = nullptr, double q_lo = 0.025, double q_hi = 0.975);
nlohmann::json posterior_json(const ChiPosterior& post);

double quantile(std::vector<double> v, double q);
double histogram_mode(const std::vector<double>& v, int bins = 50);

}  // namespace qnoise
