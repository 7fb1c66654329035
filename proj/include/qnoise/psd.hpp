#pragma once

#include <string>
#include <vector>

namespace qnoise {

struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

// Two-sided power spectral density in angular frequency (rad^2/s per rad/s),
// normalized so that C(0) = int dw/(2 pi) S(w).
class NoisePsd {
public:
    enum class Kind { OrnsteinUhlenbeck, Tabulated };

    NoisePsd() = default;

    static NoisePsd ou(double c, double tau_c);
    static NoisePsd zero() { return ou(0.0, 1.0); }
    // omega in rad/s (strictly increasing, > 0), density two-sided rad^2/s
    static NoisePsd tabulated(std::vector<double> omega, std::vector<double> density,
                              double low_plateau, double high_plateau,
                              std::vector<Band> excluded = {});

    double operator()(double omega) const;

    Kind kind() const { return kind_; }
    bool is_zero() const;
    double c() const { return c_; }
    double tau_c() const { return tau_; }
    double low_plateau() const { return low_; }
    double high_plateau() const { return high_; }
    const std::vector<double>& omega() const { return w_; }
    const std::vector<double>& density() const { return s_; }
    const std::vector<Band>& excluded() const { return bands_; }

    // frequencies (> 0) where the density has kinks or its natural scale
    std::vector<double> breakpoints() const;
    // largest finite breakpoint; beyond it the density is the high plateau (tabulated)
    double support_end() const;
    // autocovariance C(u); closed form for OU only
    double autocov(double u) const;
    bool has_closed_autocov() const { return kind_ == Kind::OrnsteinUhlenbeck; }

private:
    Kind kind_ = Kind::OrnsteinUhlenbeck;
    double c_ = 0.0, tau_ = 1.0;
    std::vector<double> w_, s_;        // effective nodes after band bridging
    std::vector<double> raw_w_, raw_s_;
    double low_ = 0.0, high_ = 0.0;
    std::vector<Band> bands_;
};

double psd_eval(const NoisePsd& psd, double omega);

// CSV `freq_hz,psd_one_sided` plus optional JSON sidecar.
// Sidecar keys: units ("hz_one_sided" default | "rad_two_sided"), low_plateau, high_plateau,
// excluded_bands (list of [lo, hi] in the file's frequency unit).
// Hz one-sided input maps to w = 2 pi f and S(w) = S_1s(f) / (2 * 2 pi), so that
// int_0^inf S_1s df = int_{-inf}^{inf} S dw.
struct PsdFile {
    std::vector<double> freq;
    std::vector<double> value;
    std::string units = "hz_one_sided";
    double low_plateau = -1.0;   // < 0: use first sample
    double high_plateau = -1.0;  // required for tabulated prediction
    std::vector<Band> excluded;
};

PsdFile read_psd_csv(const std::string& csv_path, const std::string& sidecar_path = "");
NoisePsd psd_from_file(const PsdFile& f);
// writes `omega_rad_s,psd_two_sided` and a sidecar in rad_two_sided units
void write_normalized_psd(const NoisePsd& psd, const std::string& csv_path,
                          const std::string& sidecar_path);

}  // namespace qnoise
