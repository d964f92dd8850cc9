#include "config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace kgsq {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' expects a number, got '" +
                           v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long x = std::stol(v, &pos);
        if (pos != v.size()) throw config_error("");
        return x;
    } catch (const std::exception&) {
        throw config_error("config: key '" + key +
                           "' expects an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw config_error("");
        return static_cast<std::uint64_t>(x);
    } catch (const std::exception&) {
        throw config_error("config: key '" + key +
                           "' expects an unsigned integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw config_error("config: key '" + key + "' expects true/false, got '" +
                       v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw config_error("config: key '" + key +
                               "' has an empty list entry");
        out.push_back(parse_double(key, item));
    }
    if (out.empty())
        throw config_error("config: key '" + key + "' expects a list");
    return out;
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out;
}

void apply(RunConfig& c, const std::string& section, const std::string& key,
           const std::string& value) {
    const std::string path = section.empty() ? key : section + "." + key;
    if (section.empty()) {
        if (key == "alpha")       c.model.alpha = parse_double(path, value);
        else if (key == "beta")   c.model.beta = parse_double(path, value);
        else if (key == "p")      c.model.p = parse_double(path, value);
        else if (key == "nu")     c.model.nu = parse_double(path, value);
        else if (key == "L")      c.model.L = parse_double(path, value);
        else if (key == "N")      c.model.N = static_cast<int>(parse_long(path, value));
        else if (key == "seed")   c.seed = parse_u64(path, value);
        else if (key == "t_end")  c.t_end = parse_double(path, value);
        else if (key == "dt")     c.dt = parse_double(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "scheme") {
        if (key == "cfl_max")                  c.scheme.cfl_max = parse_double(path, value);
        else if (key == "diag_interval")       c.scheme.diag_interval = parse_long(path, value);
        else if (key == "checkpoint_interval") c.scheme.checkpoint_interval = parse_long(path, value);
        else if (key == "nonlinearity") {
            if (value != "standard" && value != "momentum")
                throw config_error("config: scheme.nonlinearity must be "
                                   "'standard' or 'momentum', got '" + value + "'");
            c.scheme.nonlinearity = value;
        }
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "datum") {
        if (key == "preset") {
            if (value != "zero" && value != "random_bandlimited" &&
                value != "vortex_patch" && value != "dipole")
                throw config_error("config: unknown datum.preset '" + value + "'");
            c.datum.preset = value;
        }
        else if (key == "kmin")           c.datum.kmin = parse_double(path, value);
        else if (key == "kmax")           c.datum.kmax = parse_double(path, value);
        else if (key == "slope")          c.datum.slope = parse_double(path, value);
        else if (key == "norm")           c.datum.norm = parse_double(path, value);
        else if (key == "cx")             c.datum.cx = parse_double(path, value);
        else if (key == "cy")             c.datum.cy = parse_double(path, value);
        else if (key == "radius")         c.datum.radius = parse_double(path, value);
        else if (key == "width")          c.datum.width = parse_double(path, value);
        else if (key == "separation")     c.datum.separation = parse_double(path, value);
        else if (key == "amplitude")      c.datum.amplitude = parse_double(path, value);
        else if (key == "approx_epsilon") c.datum.approx_epsilon = parse_double(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "noise") {
        if (key == "enabled")   c.noise.enabled = parse_bool(path, value);
        else if (key == "kmax") c.noise.kmax = parse_double(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "experiment") {
        if (key == "ensemble")      c.experiment.ensemble = static_cast<int>(parse_long(path, value));
        else if (key == "samples")  c.experiment.samples = static_cast<int>(parse_long(path, value));
        else if (key == "draws")    c.experiment.draws = static_cast<int>(parse_long(path, value));
        else if (key == "nu_ladder") c.experiment.nu_ladder = parse_list(path, value);
        else if (key == "perturbation_amplitude")
            c.experiment.perturbation_amplitude = parse_double(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "covariance") {
        if (key == "alphas")                c.covariance.alphas = parse_list(path, value);
        else if (key == "radius_min")       c.covariance.radius_min = parse_double(path, value);
        else if (key == "radius_max")       c.covariance.radius_max = parse_double(path, value);
        else if (key == "radii_per_decade") c.covariance.radii_per_decade = static_cast<int>(parse_long(path, value));
        else if (key == "tol")              c.covariance.tol = parse_double(path, value);
        else if (key == "deltas")           c.covariance.deltas = parse_list(path, value);
        else if (key == "lambdas")          c.covariance.lambdas = parse_list(path, value);
        else if (key == "z_min")            c.covariance.z_min = parse_double(path, value);
        else if (key == "z_max")            c.covariance.z_max = parse_double(path, value);
        else if (key == "z_per_decade")     c.covariance.z_per_decade = static_cast<int>(parse_long(path, value));
        else if (key == "max_evals")        c.covariance.max_evals = parse_long(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else if (section == "output") {
        if (key == "dir")                    c.output.dir = value;
        else if (key == "write_svg")         c.output.write_svg = parse_bool(path, value);
        else if (key == "write_checkpoints") c.output.write_checkpoints = parse_bool(path, value);
        else throw config_error("config: unknown key '" + path + "'");
    } else {
        throw config_error("config: unknown section '[" + section + "]'");
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                throw config_error("config: empty section name at line " +
                                   std::to_string(lineno));
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected 'key = value' at line " +
                               std::to_string(lineno) + ": '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw config_error("config: empty key at line " +
                               std::to_string(lineno));
        try {
            apply(cfg, section, key, value);
        } catch (const config_error& e) {
            throw config_error(std::string(e.what()) + " at line " +
                               std::to_string(lineno));
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void set_config_key(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
    std::size_t dot = key.find('.');
    if (dot == std::string::npos)
        apply(cfg, "", key, value);
    else
        apply(cfg, key.substr(0, dot), key.substr(dot + 1), value);
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    o << "# kgsq config, format 1\n";
    o << "alpha = " << fmt(c.model.alpha) << "\n";
    o << "beta = " << fmt(c.model.beta) << "\n";
    o << "p = " << fmt(c.model.p) << "\n";
    o << "nu = " << fmt(c.model.nu) << "\n";
    o << "L = " << fmt(c.model.L) << "\n";
    o << "N = " << c.model.N << "\n";
    o << "seed = " << c.seed << "\n";
    o << "t_end = " << fmt(c.t_end) << "\n";
    o << "dt = " << fmt(c.dt) << "\n";
    o << "\n[scheme]\n";
    o << "cfl_max = " << fmt(c.scheme.cfl_max) << "\n";
    o << "diag_interval = " << c.scheme.diag_interval << "\n";
    o << "checkpoint_interval = " << c.scheme.checkpoint_interval << "\n";
    o << "nonlinearity = " << c.scheme.nonlinearity << "\n";
    o << "\n[datum]\n";
    o << "preset = " << c.datum.preset << "\n";
    o << "kmin = " << fmt(c.datum.kmin) << "\n";
    o << "kmax = " << fmt(c.datum.kmax) << "\n";
    o << "slope = " << fmt(c.datum.slope) << "\n";
    o << "norm = " << fmt(c.datum.norm) << "\n";
    o << "cx = " << fmt(c.datum.cx) << "\n";
    o << "cy = " << fmt(c.datum.cy) << "\n";
    o << "radius = " << fmt(c.datum.radius) << "\n";
    o << "width = " << fmt(c.datum.width) << "\n";
    o << "separation = " << fmt(c.datum.separation) << "\n";
    o << "amplitude = " << fmt(c.datum.amplitude) << "\n";
    o << "approx_epsilon = " << fmt(c.datum.approx_epsilon) << "\n";
    o << "\n[noise]\n";
    o << "enabled = " << (c.noise.enabled ? "true" : "false") << "\n";
    o << "kmax = " << fmt(c.noise.kmax) << "\n";
    o << "\n[experiment]\n";
    o << "ensemble = " << c.experiment.ensemble << "\n";
    o << "samples = " << c.experiment.samples << "\n";
    o << "draws = " << c.experiment.draws << "\n";
    o << "nu_ladder = " << fmt(c.experiment.nu_ladder) << "\n";
    o << "perturbation_amplitude = " << fmt(c.experiment.perturbation_amplitude)
      << "\n";
    o << "\n[covariance]\n";
    o << "alphas = " << fmt(c.covariance.alphas) << "\n";
    o << "radius_min = " << fmt(c.covariance.radius_min) << "\n";
    o << "radius_max = " << fmt(c.covariance.radius_max) << "\n";
    o << "radii_per_decade = " << c.covariance.radii_per_decade << "\n";
    o << "tol = " << fmt(c.covariance.tol) << "\n";
    o << "deltas = " << fmt(c.covariance.deltas) << "\n";
    o << "lambdas = " << fmt(c.covariance.lambdas) << "\n";
    o << "z_min = " << fmt(c.covariance.z_min) << "\n";
    o << "z_max = " << fmt(c.covariance.z_max) << "\n";
    o << "z_per_decade = " << c.covariance.z_per_decade << "\n";
    o << "max_evals = " << c.covariance.max_evals << "\n";
    o << "\n[output]\n";
    o << "dir = " << c.output.dir << "\n";
    o << "write_svg = " << (c.output.write_svg ? "true" : "false") << "\n";
    o << "write_checkpoints = " << (c.output.write_checkpoints ? "true" : "false")
      << "\n";
    return o.str();
}

}  // namespace kgsq
