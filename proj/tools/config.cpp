#include "config.hpp"

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qnoise/error.hpp"

namespace qnoise::cli {

namespace fs = std::filesystem;

json default_config() {
    return json::parse(R"({
  "drive": {
    "omega": 125663.70614359173,
    "phi": 0.0,
    "t_max": 1e-4,
    "n_times": 40,
    "times": [],
    "omega_sweep": []
  },
  "noise": {
    "model": "ou",
    "c": 2e8,
    "tau_c": 5e-4,
    "psd_csv": "",
    "psd_sidecar": "",
    "amplitude": {
      "model": "none",
      "c": 0.0,
      "tau_c": 0.0,
      "psd_csv": "",
      "psd_sidecar": ""
    }
  },
  "simulation": {
    "seed": 1,
    "m_mc": 2000,
    "dt": 0.0,
    "n_states": 1000
  },
  "tomography": {
    "counts_csv": "",
    "shots_per_setting": 100,
    "repetitions": 20,
    "mle_starts": 8,
    "chain_steps": 20000
  },
  "rb": {
    "model": "nm",
    "twirl": true,
    "p_quarter": 1e-3,
    "lengths": [],
    "n_seq": 100,
    "shots": 100
  },
  "outputs": {
    "directory": "out",
    "formats": ["csv", "json"]
  }
})");
}

namespace {

std::string type_name(const json& v) {
    if (v.is_number_integer()) return "integer";
    if (v.is_number()) return "number";
    return v.type_name();
}

// user keys must exist in the defaults with a compatible type
void check_shape(const json& user, const json& ref, const std::string& path) {
    if (!user.is_object()) fail(ErrorKind::InvalidInput, "config: '" + path + "' must be an object");
    for (const auto& [key, val] : user.items()) {
        const std::string p = path.empty() ? key : path + "." + key;
        if (!ref.contains(key)) fail(ErrorKind::InvalidInput, "config: unknown key '" + p + "'");
        const json& r = ref.at(key);
        if (r.is_object()) {
            check_shape(val, r, p);
            continue;
        }
        bool ok = false;
        if (r.is_number_integer()) ok = val.is_number_integer() && (val.is_number_unsigned() || val.get<long long>() >= 0);
        else if (r.is_number()) ok = val.is_number();
        else if (r.is_boolean()) ok = val.is_boolean();
        else if (r.is_string()) ok = val.is_string();
        else if (r.is_array()) ok = val.is_array();
        if (!ok)
            fail(ErrorKind::InvalidInput,
                 "config: '" + p + "' has type " + type_name(val) + ", expected " + type_name(r));
    }
}

void check_numbers(const json& arr, const std::string& path) {
    for (const auto& v : arr)
        if (!v.is_number()) fail(ErrorKind::InvalidInput, "config: '" + path + "' must hold numbers");
}

void positive(const json& node, const char* key, const std::string& path) {
    if (!(node.at(key).get<double>() > 0.0))
        fail(ErrorKind::InvalidInput, "config: '" + path + "." + key + "' must be > 0");
}

void resolve_path(json& node, const char* key, const std::string& base) {
    auto s = node.at(key).get<std::string>();
    if (s.empty()) return;
    fs::path p(s);
    if (p.is_relative()) p = fs::path(base) / p;
    node[key] = p.lexically_normal().string();
}

void require_file(const json& node, const char* key, const std::string& path) {
    const auto s = node.at(key).get<std::string>();
    if (s.empty()) fail(ErrorKind::InvalidInput, "config: '" + path + "." + key + "' is required");
    if (!fs::exists(s)) fail(ErrorKind::InvalidInput, "config: '" + path + "." + key + "' file not found: " + s);
}

void validate_noise(json& n, const std::string& path, const std::string& base) {
    const auto model = n.at("model").get<std::string>();
    resolve_path(n, "psd_csv", base);
    resolve_path(n, "psd_sidecar", base);
    if (model == "ou") {
        positive(n, "tau_c", path);
        if (!(n.at("c").get<double>() >= 0.0)) fail(ErrorKind::InvalidInput, "config: '" + path + ".c' must be >= 0");
    } else if (model == "file") {
        require_file(n, "psd_csv", path);
        if (!n.at("psd_sidecar").get<std::string>().empty()) require_file(n, "psd_sidecar", path);
    } else if (model != "none") {
        fail(ErrorKind::InvalidInput, "config: '" + path + ".model' must be one of none, ou, file");
    }
}

}  // namespace

json resolve_config(const json& user, const std::string& base_dir) {
    json cfg = default_config();
    check_shape(user, cfg, "");
    cfg.merge_patch(user);

    auto& d = cfg["drive"];
    positive(d, "omega", "drive");
    check_numbers(d.at("times"), "drive.times");
    check_numbers(d.at("omega_sweep"), "drive.omega_sweep");
    if (d.at("times").empty()) {
        positive(d, "t_max", "drive");
        if (d.at("n_times").get<long long>() < 1) fail(ErrorKind::InvalidInput, "config: 'drive.n_times' must be >= 1");
    } else {
        double prev = 0.0;
        for (const auto& t : d.at("times")) {
            if (!(t.get<double>() > prev))
                fail(ErrorKind::InvalidInput, "config: 'drive.times' must be positive and strictly increasing");
            prev = t.get<double>();
        }
    }
    for (const auto& w : d.at("omega_sweep"))
        if (!(w.get<double>() > 0.0)) fail(ErrorKind::InvalidInput, "config: 'drive.omega_sweep' entries must be > 0");

    validate_noise(cfg["noise"], "noise", base_dir);
    validate_noise(cfg["noise"]["amplitude"], "noise.amplitude", base_dir);

    const auto& s = cfg["simulation"];
    if (s.at("m_mc").get<long long>() < 1) fail(ErrorKind::InvalidInput, "config: 'simulation.m_mc' must be >= 1");
    if (s.at("n_states").get<long long>() < 1) fail(ErrorKind::InvalidInput, "config: 'simulation.n_states' must be >= 1");
    if (!(s.at("dt").get<double>() >= 0.0)) fail(ErrorKind::InvalidInput, "config: 'simulation.dt' must be >= 0");

    auto& tm = cfg["tomography"];
    resolve_path(tm, "counts_csv", base_dir);
    if (!tm.at("counts_csv").get<std::string>().empty()) require_file(tm, "counts_csv", "tomography");
    if (tm.at("shots_per_setting").get<long long>() < 1)
        fail(ErrorKind::InvalidInput, "config: 'tomography.shots_per_setting' must be >= 1");
    if (tm.at("repetitions").get<long long>() < 1)
        fail(ErrorKind::InvalidInput, "config: 'tomography.repetitions' must be >= 1");
    if (tm.at("mle_starts").get<long long>() < 1)
        fail(ErrorKind::InvalidInput, "config: 'tomography.mle_starts' must be >= 1");

    const auto& rb = cfg["rb"];
    const auto rm = rb.at("model").get<std::string>();
    if (rm != "nm" && rm != "depolarizing") fail(ErrorKind::InvalidInput, "config: 'rb.model' must be nm or depolarizing");
    if (!(rb.at("p_quarter").get<double>() >= 0.0 && rb.at("p_quarter").get<double>() <= 0.75))
        fail(ErrorKind::InvalidInput, "config: 'rb.p_quarter' must lie in [0, 0.75]");
    for (const auto& m : rb.at("lengths"))
        if (!m.is_number_integer() || m.get<long long>() < 1)
            fail(ErrorKind::InvalidInput, "config: 'rb.lengths' must hold positive integers");
    if (rb.at("n_seq").get<long long>() < 1) fail(ErrorKind::InvalidInput, "config: 'rb.n_seq' must be >= 1");

    auto& out = cfg["outputs"];
    for (const auto& f : out.at("formats"))
        if (!f.is_string() || (f != "csv" && f != "json"))
            fail(ErrorKind::InvalidInput, "config: 'outputs.formats' entries must be \"csv\" or \"json\"");
    resolve_path(out, "directory", base_dir);
    return cfg;
}

std::optional<NoiseSpec> noise_from_config(const json& node) {
    const auto model = node.at("model").get<std::string>();
    if (model == "none") return std::nullopt;
    NoiseSpec n;
    if (model == "ou") {
        n.is_ou = true;
        n.c = node.at("c").get<double>();
        n.tau_c = node.at("tau_c").get<double>();
        n.psd = NoisePsd::ou(n.c, n.tau_c);
    } else {
        n.psd = psd_from_file(read_psd_csv(node.at("psd_csv").get<std::string>(),
                                           node.at("psd_sidecar").get<std::string>()));
    }
    return n;
}

std::vector<double> time_grid(const json& drive) {
    std::vector<double> t;
    if (!drive.at("times").empty()) {
        for (const auto& v : drive.at("times")) t.push_back(v.get<double>());
        return t;
    }
    const auto n = drive.at("n_times").get<std::size_t>();
    const double tmax = drive.at("t_max").get<double>();
    for (std::size_t i = 1; i <= n; ++i) t.push_back(tmax * static_cast<double>(i) / static_cast<double>(n));
    return t;
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::string hex;
    static const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex += digits[md[i] >> 4];
        hex += digits[md[i] & 15];
    }
    return hex;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = "qnoise";
    m["version"] = QNOISE_VERSION;
    m["command"] = command;
    m["config_sha256"] = sha256_hex(config.dump());
    m["seeds"] = {{"base", config.at("simulation").at("seed")},
                  {"derivation", "stream generators seeded from (base, stream, substream)"}};
    json files = json::array();
    for (const auto& o : outputs) files.push_back({{"file", o}, {"sha256", sha256_file((fs::path(dir) / o).string())}});
    m["outputs"] = files;
    std::ofstream(fs::path(dir) / "manifest.json") << m.dump(2) << '\n';
}

}  // namespace qnoise::cli
