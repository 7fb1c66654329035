#include "qnoise/psd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numbers>
#include <sstream>

#include "qnoise/error.hpp"

namespace qnoise {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double interp_loglog(double x0, double y0, double x1, double y1, double x) {
    if (y0 > 0.0 && y1 > 0.0 && x0 > 0.0) {
        const double f = std::log(x / x0) / std::log(x1 / x0);
        return std::exp(std::log(y0) + f * (std::log(y1) - std::log(y0)));
    }
    const double f = (x - x0) / (x1 - x0);
    return y0 + f * (y1 - y0);
}

double interp_nodes(const std::vector<double>& w, const std::vector<double>& s, double x) {
    auto it = std::upper_bound(w.begin(), w.end(), x);
    if (it == w.begin()) return s.front();
    if (it == w.end()) return s.back();
    const std::size_t i = static_cast<std::size_t>(it - w.begin());
    return interp_loglog(w[i - 1], s[i - 1], w[i], s[i], x);
}

}  // namespace

NoisePsd NoisePsd::ou(double c, double tau_c) {
    require(c >= 0.0 && std::isfinite(c), "OU diffusion constant must be >= 0");
    require(tau_c > 0.0 && std::isfinite(tau_c), "OU correlation time must be > 0");
    NoisePsd p;
    p.kind_ = Kind::OrnsteinUhlenbeck;
    p.c_ = c;
    p.tau_ = tau_c;
    return p;
}

NoisePsd NoisePsd::tabulated(std::vector<double> omega, std::vector<double> density,
                             double low_plateau, double high_plateau, std::vector<Band> excluded) {
    if (omega.size() < 2 || omega.size() != density.size())
        fail(ErrorKind::InvalidInput, "tabulated PSD needs >= 2 samples with matching sizes");
    for (std::size_t i = 0; i < omega.size(); ++i) {
        require(std::isfinite(omega[i]) && omega[i] > 0.0, "PSD frequencies must be positive");
        require(std::isfinite(density[i]) && density[i] >= 0.0, "PSD densities must be >= 0");
        if (i > 0) require(omega[i] > omega[i - 1], "PSD frequencies must be strictly increasing");
    }
    require(low_plateau >= 0.0 && high_plateau >= 0.0, "PSD plateaus must be >= 0");
    for (const auto& b : excluded) require(b.hi > b.lo && b.lo >= 0.0, "bad excluded band");

    NoisePsd p;
    p.kind_ = Kind::Tabulated;
    p.raw_w_ = omega;
    p.raw_s_ = density;
    p.low_ = low_plateau;
    p.high_ = high_plateau;
    p.bands_ = std::move(excluded);
    std::sort(p.bands_.begin(), p.bands_.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });

    // drop samples inside excluded bands, pin band edges to the raw interpolant
    std::vector<std::pair<double, double>> nodes;
    auto inside = [&](double x) {
        return std::any_of(p.bands_.begin(), p.bands_.end(),
                           [x](const Band& b) { return x > b.lo && x < b.hi; });
    };
    for (std::size_t i = 0; i < omega.size(); ++i)
        if (!inside(omega[i])) nodes.emplace_back(omega[i], density[i]);
    for (const auto& b : p.bands_)
        for (double e : {b.lo, b.hi})
            if (e >= omega.front() && e <= omega.back() && !inside(e))
                nodes.emplace_back(e, interp_nodes(omega, density, e));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                nodes.end());
    if (nodes.size() < 2) fail(ErrorKind::InvalidInput, "excluded bands remove all PSD samples");
    for (const auto& [w, s] : nodes) {
        p.w_.push_back(w);
        p.s_.push_back(s);
    }
    return p;
}

bool NoisePsd::is_zero() const {
    if (kind_ == Kind::OrnsteinUhlenbeck) return c_ == 0.0;
    return low_ == 0.0 && high_ == 0.0 &&
           std::all_of(s_.begin(), s_.end(), [](double v) { return v == 0.0; });
}

double NoisePsd::operator()(double omega) const {
    const double w = std::abs(omega);
    if (kind_ == Kind::OrnsteinUhlenbeck) {
        const double x = w * tau_;
        return c_ * tau_ * tau_ / (1.0 + x * x);
    }
    if (w < w_.front()) return low_;
    if (w > w_.back()) return high_;
    return interp_nodes(w_, s_, w);
}

std::vector<double> NoisePsd::breakpoints() const {
    if (kind_ == Kind::OrnsteinUhlenbeck) return {1.0 / tau_};
    return w_;
}

double NoisePsd::support_end() const {
    return kind_ == Kind::OrnsteinUhlenbeck ? 1.0 / tau_ : w_.back();
}

double NoisePsd::autocov(double u) const {
    if (kind_ != Kind::OrnsteinUhlenbeck)
        fail(ErrorKind::InvalidInput, "closed-form autocovariance is only available for OU");
    return 0.5 * c_ * tau_ * std::exp(-std::abs(u) / tau_);
}

double psd_eval(const NoisePsd& psd, double omega) { return psd(omega); }

PsdFile read_psd_csv(const std::string& csv_path, const std::string& sidecar_path) {
    std::ifstream in(csv_path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open PSD file " + csv_path);
    PsdFile f;
    std::string line;
    std::size_t row = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            if (line.find_first_of("abcdefghijklmnopqrstuvwxyz") != std::string::npos) continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double a = 0, b = 0;
        if (!(ss >> a >> b))
            fail(ErrorKind::InvalidInput, "PSD file row " + std::to_string(row) + ": expected two numbers");
        if (!f.freq.empty() && a <= f.freq.back())
            fail(ErrorKind::InvalidInput, "PSD file row " + std::to_string(row) + ": frequencies not increasing");
        f.freq.push_back(a);
        f.value.push_back(b);
    }
    if (f.freq.size() < 2) fail(ErrorKind::InvalidInput, "PSD file has fewer than 2 rows");
    if (!sidecar_path.empty()) {
        std::ifstream js(sidecar_path);
        if (!js) fail(ErrorKind::InvalidInput, "cannot open sidecar " + sidecar_path);
        nlohmann::json j;
        try {
            js >> j;
        } catch (const std::exception& e) {
            fail(ErrorKind::InvalidInput, std::string("sidecar parse error: ") + e.what());
        }
        f.units = j.value("units", f.units);
        f.low_plateau = j.value("low_plateau", f.low_plateau);
        f.high_plateau = j.value("high_plateau", f.high_plateau);
        if (j.contains("excluded_bands"))
            for (const auto& b : j.at("excluded_bands")) f.excluded.push_back({b.at(0), b.at(1)});
    }
    if (f.units != "hz_one_sided" && f.units != "rad_two_sided")
        fail(ErrorKind::InvalidInput, "unknown PSD units '" + f.units + "'");
    return f;
}

NoisePsd psd_from_file(const PsdFile& f) {
    const bool hz = f.units == "hz_one_sided";
    const double wscale = hz ? two_pi : 1.0;
    const double sscale = hz ? 1.0 / (2.0 * two_pi) : 1.0;
    if (f.high_plateau < 0.0)
        fail(ErrorKind::InvalidInput, "high-frequency plateau must be given explicitly");
    std::vector<double> w(f.freq.size()), s(f.value.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = f.freq[i] * wscale;
        s[i] = f.value[i] * sscale;
    }
    const double low = f.low_plateau < 0.0 ? s.front() : f.low_plateau * sscale;
    std::vector<Band> bands;
    for (const auto& b : f.excluded) bands.push_back({b.lo * wscale, b.hi * wscale});
    return NoisePsd::tabulated(std::move(w), std::move(s), low, f.high_plateau * sscale, std::move(bands));
}

void write_normalized_psd(const NoisePsd& psd, const std::string& csv_path,
                          const std::string& sidecar_path) {
    require(psd.kind() == NoisePsd::Kind::Tabulated, "only tabulated PSDs can be written");
    std::ofstream out(csv_path);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + csv_path);
    out << "omega_rad_s,psd_two_sided\n" << std::setprecision(17);
    for (std::size_t i = 0; i < psd.omega().size(); ++i)
        out << psd.omega()[i] << ',' << psd.density()[i] << '\n';
    nlohmann::json j;
    j["units"] = "rad_two_sided";
    j["low_plateau"] = psd.low_plateau();
    j["high_plateau"] = psd.high_plateau();
    // bands are already bridged into the node list
    j["excluded_bands"] = nlohmann::json::array();
    std::ofstream js(sidecar_path);
    if (!js) fail(ErrorKind::InvalidInput, "cannot write " + sidecar_path);
    js << j.dump(2) << '\n';
}

}  // namespace qnoise
