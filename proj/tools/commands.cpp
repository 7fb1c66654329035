#include "commands.hpp"

#include <fmt/format.h>
#include <fmt/os.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qnoise/error.hpp"
#include "qnoise/errormap.hpp"
#include "qnoise/filters.hpp"
#include "qnoise/langevin.hpp"
#include "qnoise/noisegen.hpp"
#include "qnoise/parallel.hpp"
#include "qnoise/rb.hpp"
#include "qnoise/tomography.hpp"

namespace qnoise::cli {

namespace fs = std::filesystem;

namespace {

class Outputs {
public:
    explicit Outputs(const json& config) : config_(config) {
        dir_ = config.at("outputs").at("directory").get<std::string>();
        for (const auto& f : config.at("outputs").at("formats")) {
            csv_ = csv_ || f == "csv";
            json_ = json_ || f == "json";
        }
        fs::create_directories(dir_);
    }
    bool csv() const { return csv_; }
    bool json_enabled() const { return json_; }
    std::string path(const std::string& name) {
        files_.push_back(name);
        return (fs::path(dir_) / name).string();
    }
    void write_json(const std::string& name, const json& j) {
        if (json_) std::ofstream(path(name)) << j.dump(2) << '\n';
    }
    void finish(const std::string& command) {
        std::ofstream(fs::path(dir_) / "config.resolved.json") << config_.dump(2) << '\n';
        files_.push_back("config.resolved.json");
        write_manifest(dir_, command, config_, files_);
        spdlog::info("{}: wrote {} files to {}", command, files_.size() + 1, dir_);
    }

private:
    const json& config_;
    std::string dir_;
    bool csv_ = false, json_ = false;
    std::vector<std::string> files_;
};

std::string num(double v) { return fmt::format("{:.17g}", v); }

struct Noise {
    NoiseSpec freq;
    std::optional<NoiseSpec> amp;
};

Noise load_noise(const json& config) {
    const auto& n = config.at("noise");
    auto f = noise_from_config(n);
    Noise out{f ? *f : NoiseSpec{NoisePsd::zero(), true, 0.0, 1.0}, noise_from_config(n.at("amplitude"))};
    return out;
}

FilteredIntegrals integrals(const Noise& n, double Omega, const std::vector<double>& times) {
    if (n.freq.is_ou && (!n.amp || n.amp->is_ou)) {
        std::optional<std::pair<double, double>> amp;
        if (n.amp) amp = std::make_pair(n.amp->c, n.amp->tau_c);
        return ou_filtered_integrals(n.freq.c, n.freq.tau_c, Omega, times, amp);
    }
    return filtered_integrals(n.freq.psd, n.amp ? &n.amp->psd : nullptr, Omega, times);
}

Mat2 rz(double phi) {
    Mat2 u = Mat2::Zero();
    u(0, 0) = std::exp(cplx(0.0, -phi / 2));
    u(1, 1) = std::exp(cplx(0.0, phi / 2));
    return u;
}

// error channels are derived for an x drive; a drive phase conjugates them by Rz(phi)
Mat4 rotate_error(const Mat4& S, double phi) {
    if (phi == 0.0) return S;
    const Mat4 R = unitary_superop(rz(phi));
    return R * S * R.adjoint();
}

}  // namespace

// ---------------------------------------------------------------------------

void cmd_predict(const json& config) {
    Outputs out(config);
    const auto& d = config.at("drive");
    const double Omega = d.at("omega").get<double>();
    const Noise noise = load_noise(config);
    const bool amp = noise.amp.has_value();
    check_validity(noise.freq.psd, Omega);
    const auto times = time_grid(d);
    const FilteredIntegrals fi = integrals(noise, Omega, times);

    if (out.csv()) {
        write_filtered_integrals_csv(fi, out.path("filtered_integrals.csv"));
        auto f = fmt::output_file(out.path("errors.csv"));
        f.print("t,eps_D,eps_NC,eps_NM,eps_PT{}\n", amp ? ",eps_NC_I,eps_NM_I" : "");
        for (std::size_t i = 0; i < fi.size(); ++i) {
            const FiPoint p = fi.at(i);
            const double pt = 1.0 - error_channel_fidelity(pauli_channel(pauli_twirl(p, amp)));
            f.print("{},{},{},{},{}", num(p.t), num(gate_error(p, ErrorModel::D)), num(gate_error(p, ErrorModel::NC)),
                    num(gate_error(p, ErrorModel::NM)), num(pt));
            if (amp) f.print(",{},{}", num(gate_error(p, ErrorModel::NC_I)), num(gate_error(p, ErrorModel::NM_I)));
            f.print("\n");
        }
    }
    if (out.json_enabled()) {
        json snaps = json::array();
        for (std::size_t i = 0; i < fi.size(); ++i) snaps.push_back(snapshot_json(fi.at(i), Omega, amp));
        out.write_json("snapshots.json", {{"omega", Omega}, {"with_amplitude", amp}, {"snapshots", snaps}});
    }
    if (!d.at("omega_sweep").empty() && out.csv()) {
        auto f = fmt::output_file(out.path("pi_pulse.csv"));
        f.print("omega,t,eps_D,eps_NC,eps_NM\n");
        for (const auto& w : d.at("omega_sweep")) {
            const double Om = w.get<double>();
            const FiPoint p = integrals(noise, Om, {M_PI / Om}).at(0);
            f.print("{},{},{},{},{}\n", num(Om), num(p.t), num(gate_error(p, ErrorModel::D)),
                    num(gate_error(p, ErrorModel::NC)), num(gate_error(p, ErrorModel::NM)));
        }
    }
    out.finish("predict");
}

// ---------------------------------------------------------------------------

void cmd_validate(const json& config) {
    Outputs out(config);
    const auto& d = config.at("drive");
    const auto& sim = config.at("simulation");
    const double Omega = d.at("omega").get<double>(), phi = d.at("phi").get<double>();
    const Noise noise = load_noise(config);
    const bool amp = noise.amp.has_value();
    const double zeta = check_validity(noise.freq.psd, Omega);

    DriveConfig drive;
    drive.Omega = Omega;
    drive.phi = phi;
    drive.m_mc = sim.at("m_mc").get<std::size_t>();
    double tau = noise.freq.is_ou ? noise.freq.tau_c : 0.0;
    drive.dt = sim.at("dt").get<double>() > 0.0 ? sim.at("dt").get<double>() : default_dt(tau, Omega);

    // snapshot times snap to the integration grid
    EnsembleOptions opt;
    opt.seed = sim.at("seed").get<std::uint64_t>();
    for (double t : time_grid(d)) {
        const auto k = static_cast<std::size_t>(std::llround(t / drive.dt));
        if (k == 0) fail(ErrorKind::InvalidInput, fmt::format("time {} is below the integration step {}", t, drive.dt));
        if (!opt.snapshot_steps.empty() && k <= opt.snapshot_steps.back())
            fail(ErrorKind::InvalidInput, fmt::format("times {} and its predecessor map to the same step", t));
        opt.snapshot_steps.push_back(k);
    }
    drive.n_steps = opt.snapshot_steps.back();
    const auto freq_src = make_noise_source(noise.freq.psd);
    std::unique_ptr<NoiseSource> amp_src;
    if (amp) amp_src = make_noise_source(noise.amp->psd);
    const auto res = evolve_ensemble(std::vector<DensityMatrix>{ket_proj(Vec2(1.0, 0.0))}, drive, *freq_src,
                                     amp_src.get(), opt);
    const FilteredIntegrals fi = integrals(noise, Omega, res.times);

    Rng rng = make_stream(opt.seed, 1);
    std::vector<Mat2> psi;
    for (long long n = 0; n < sim.at("n_states").get<long long>(); ++n) psi.push_back(ket_proj(haar_state(rng)));

    const char* names[4] = {"D", "PT", "NC", "NM"};
    std::vector<std::array<double, 4>> infid(res.times.size());
    parallel_for(res.times.size(), [&](std::size_t i) {
        const FiPoint p = fi.at(i);
        const Mat4 SU = unitary_superop(drive_unitary(Omega, phi, p.t));
        const Mat4 S[4] = {rotate_error(chi_to_superop(depolarizing_channel(depolarizing_rate(p)).chi), phi) * SU,
                           rotate_error(chi_to_superop(pauli_channel(pauli_twirl(p, amp)).chi), phi) * SU,
                           rotate_error(kraus_to_superop(kraus_nc(p, Omega, amp)), phi) * SU,
                           rotate_error(chi_to_superop(chi_nm(p, amp).chi), phi) * SU};
        const Mat4 chi_mc = superop_to_chi(res.superop[i]);
        Mat4 chi_model[4];
        for (int m = 0; m < 4; ++m) chi_model[m] = superop_to_chi(S[m]);
        std::array<double, 4> acc{};
        for (const auto& r : psi) {
            const Mat2 truth = apply_chi(chi_mc, r);
            for (int m = 0; m < 4; ++m) acc[m] += 1.0 - state_fidelity(truth, apply_chi(chi_model[m], r));
        }
        for (int m = 0; m < 4; ++m) infid[i][m] = acc[m] / static_cast<double>(psi.size());
    });

    std::array<double, 4> avg{}, peak{};
    for (const auto& row : infid)
        for (int m = 0; m < 4; ++m) {
            avg[m] += row[m] / static_cast<double>(infid.size());
            peak[m] = std::max(peak[m], row[m]);
        }
    if (out.csv()) {
        auto f = fmt::output_file(out.path("validation.csv"));
        f.print("t,infidelity_D,infidelity_PT,infidelity_NC,infidelity_NM\n");
        for (std::size_t i = 0; i < infid.size(); ++i)
            f.print("{},{},{},{},{}\n", num(res.times[i]), num(infid[i][0]), num(infid[i][1]), num(infid[i][2]),
                    num(infid[i][3]));
        write_trajectory_csv(res.per_state[0], out.path("trajectory_ground.csv"));
    }
    json summary;
    for (int m = 0; m < 4; ++m) summary[names[m]] = {{"time_average", avg[m]}, {"peak", peak[m]}};
    out.write_json("validation.json", {{"infidelity", summary},
                                       {"m_mc", drive.m_mc},
                                       {"n_states", psi.size()},
                                       {"dt", drive.dt},
                                       {"max_norm_drift", res.max_norm_drift},
                                       {"zeta_dress", std::isfinite(zeta) ? json(zeta) : json(nullptr)}});
    out.finish("validate");
}

// ---------------------------------------------------------------------------

namespace {

struct TomoRow {
    double t = 0.0, eps_analytic = NAN, eps_mle_mean = 0.0, eps_mle_lo = 0.0, eps_mle_hi = 0.0, eps_li_mean = 0.0;
};

}  // namespace

void cmd_tomography(const json& config) {
    Outputs out(config);
    const auto& d = config.at("drive");
    const auto& tc = config.at("tomography");
    const double Omega = d.at("omega").get<double>(), phi = d.at("phi").get<double>();
    const auto seed = config.at("simulation").at("seed").get<std::uint64_t>();
    MleOptions mo;
    mo.starts = tc.at("mle_starts").get<int>();
    mo.seed = seed;
    MhOptions mh;
    mh.steps = tc.at("chain_steps").get<std::size_t>();
    mh.seed = seed + 1;

    std::vector<CountRecord> records;
    std::vector<TomoRow> rows;
    const auto counts_path = tc.at("counts_csv").get<std::string>();
    if (!counts_path.empty()) {
        records = read_counts_csv(counts_path);
        rows.resize(records.size());
        parallel_for(records.size(), [&](std::size_t i) {
            check_counts(records[i]);
            const Mat2 U = drive_unitary(Omega, phi, records[i].time);
            const double e = process_gate_error(mle_fit(records[i], mo).chi, U);
            rows[i] = {records[i].time, NAN, e, e, e, process_gate_error(linear_inversion(frequencies(records[i])), U)};
        });
    } else {
        const Noise noise = load_noise(config);
        const bool amp = noise.amp.has_value();
        const auto times = time_grid(d);
        const FilteredIntegrals fi = integrals(noise, Omega, times);
        const auto reps = tc.at("repetitions").get<std::size_t>();
        const auto shots = tc.at("shots_per_setting").get<long>();
        std::vector<double> eps_mle(times.size() * reps), eps_li(times.size() * reps);
        records.resize(times.size());
        std::vector<ProbTable> probs(times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            const Mat2 U = drive_unitary(Omega, phi, times[i]);
            const Mat4 err = superop_to_chi(rotate_error(chi_to_superop(chi_nm(fi.at(i), amp).chi), phi));
            probs[i] = born_probs(chi_after_unitary(err, U));
        }
        parallel_for(times.size() * reps, [&](std::size_t job) {
            const std::size_t i = job / reps, r = job % reps;
            Rng rng = make_stream(seed, 100 + i, r);
            const CountRecord c = sample_shots(probs[i], shots, rng, times[i]);
            if (r == 0) records[i] = c;
            const Mat2 U = drive_unitary(Omega, phi, times[i]);
            MleOptions o = mo;
            o.seed = seed + r;
            eps_mle[job] = process_gate_error(mle_fit(c, o).chi, U);
            eps_li[job] = process_gate_error(linear_inversion(frequencies(c)), U);
        });
        for (std::size_t i = 0; i < times.size(); ++i) {
            std::vector<double> e(eps_mle.begin() + i * reps, eps_mle.begin() + (i + 1) * reps);
            double li = 0.0;
            for (std::size_t r = 0; r < reps; ++r) li += eps_li[i * reps + r] / static_cast<double>(reps);
            double mean = 0.0;
            for (double v : e) mean += v / static_cast<double>(reps);
            rows.push_back({times[i], gate_error(fi.at(i), amp ? ErrorModel::NM_I : ErrorModel::NM), mean,
                            quantile(e, 0.025), quantile(e, 0.975), li});
        }
        if (out.csv()) write_counts_csv(records, out.path("counts_simulated.csv"));
    }

    if (out.csv()) {
        auto f = fmt::output_file(out.path("tomography.csv"));
        f.print("t,eps_NM_analytic,eps_mle_mean,eps_mle_q025,eps_mle_q975,eps_li_mean\n");
        for (const auto& r : rows)
            f.print("{},{},{},{},{},{}\n", num(r.t), std::isnan(r.eps_analytic) ? "" : num(r.eps_analytic),
                    num(r.eps_mle_mean), num(r.eps_mle_lo), num(r.eps_mle_hi), num(r.eps_li_mean));
    }
    if (mh.steps > 0 && out.json_enabled()) {
        std::vector<json> posts(records.size());
        parallel_for(records.size(), [&](std::size_t i) {
            MhOptions o = mh;
            o.seed = mh.seed + i;
            json j = posterior_json(mh_chain(records[i], drive_unitary(Omega, phi, records[i].time), o));
            j["t"] = records[i].time;
            posts[i] = std::move(j);
        });
        out.write_json("posterior.json", json(posts));
    }
    out.finish("tomography");
}

// ---------------------------------------------------------------------------

void cmd_rb(const json& config) {
    Outputs out(config);
    const auto& rc = config.at("rb");
    RbOptions opt;
    for (const auto& m : rc.at("lengths")) opt.lengths.push_back(m.get<std::size_t>());
    opt.n_seq = rc.at("n_seq").get<std::size_t>();
    opt.shots = rc.at("shots").get<long>();
    opt.seed = config.at("simulation").at("seed").get<std::uint64_t>();
    const double Omega = config.at("drive").at("omega").get<double>();

    json extra;
    RbResult res;
    if (rc.at("model") == "depolarizing") {
        const double p = rc.at("p_quarter").get<double>();
        res = rb_simulate(depolarizing_pulse_error(p), opt);
        extra = {{"model", "depolarizing"}, {"p_quarter", p}, {"lambda_analytic", rb_depolarizing_lambda(p)}};
    } else {
        const Noise noise = load_noise(config);
        check_validity(noise.freq.psd, Omega);
        const bool twirl = rc.at("twirl").get<bool>();
        res = rb_simulate(nm_pulse_error(noise.freq.psd, Omega, twirl), opt);
        const FiPoint pi = filtered_integrals_at(noise.freq.psd, nullptr, Omega, M_PI / Omega);
        extra = {{"model", "nm"}, {"twirl", twirl}, {"eps_NM_pi_pulse", gate_error(pi, ErrorModel::NM)}};
    }
    if (out.csv()) write_rb_csv(res, out.path("rb.csv"));
    json j = rb_json(res);
    j["channel"] = extra;
    out.write_json("rb.json", j);
    out.finish("rb");
}

// ---------------------------------------------------------------------------

void cmd_ingest_psd(const json& config, const std::string& csv, const std::string& sidecar) {
    Outputs out(config);
    const auto& n = config.at("noise");
    const std::string in_csv = csv.empty() ? n.at("psd_csv").get<std::string>() : csv;
    const std::string in_side = csv.empty() ? n.at("psd_sidecar").get<std::string>() : sidecar;
    require(!in_csv.empty(), "ingest-psd needs a PSD CSV (--csv or noise.psd_csv)");
    require(fs::exists(in_csv), "PSD file not found: " + in_csv);
    require(in_side.empty() || fs::exists(in_side), "sidecar file not found: " + in_side);
    const NoisePsd psd = psd_from_file(read_psd_csv(in_csv, in_side));
    write_normalized_psd(psd, out.path("psd_normalized.csv"), out.path("psd_normalized.json"));
    out.finish("ingest-psd");
}

}  // namespace qnoise::cli
