#include "scaffold/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace scaffold {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// The config surface only needs flat `key = value` pairs under [section]
// headers (strings, numbers, booleans), so a small hand-rolled reader
// covers it.
std::map<std::string, std::string> parse_flat_toml(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            // keep '#' inside quoted strings
            const auto quote = line.find('"');
            if (quote == std::string::npos || hash < quote)
                line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) +
                              ": empty key or value");
        if (!section.empty()) key = section + "." + key;
        if (kv.count(key))
            throw ConfigError("duplicate key " + key);
        kv[key] = value;
    }
    return kv;
}

double to_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key " + key + ": expected a number, got '" + value +
                          "'");
    }
}

std::string to_string_value(const std::string& key, const std::string& value) {
    if (value.size() < 2 || value.front() != '"' || value.back() != '"')
        throw ConfigError("key " + key + ": expected a quoted string");
    return value.substr(1, value.size() - 2);
}

} // namespace

RunConfig parse_config(const std::string& toml_text) {
    RunConfig cfg;
    auto kv = parse_flat_toml(toml_text);

    std::map<std::string, std::function<void(const std::string&,
                                             const std::string&)>> setters;
    auto num = [&](const char* key, auto setter) {
        setters[key] = [setter](const std::string& k, const std::string& v) {
            setter(to_number(k, v));
        };
    };
    num("canny.low", [&](double v) { cfg.canny_low = v; });
    num("canny.high", [&](double v) { cfg.canny_high = v; });
    num("hough.rho_res", [&](double v) { cfg.hough.rho_res = v; });
    num("hough.theta_res_deg",
        [&](double v) { cfg.hough.theta_res = v * M_PI / 180.0; });
    num("hough.threshold_frac", [&](double v) { cfg.hough.threshold_frac = v; });
    num("hough.threshold_abs",
        [&](double v) { cfg.hough.threshold_abs = static_cast<int>(v); });
    num("hough.nms_rho", [&](double v) { cfg.hough.nms_rho = static_cast<int>(v); });
    num("hough.nms_theta",
        [&](double v) { cfg.hough.nms_theta = static_cast<int>(v); });
    num("hough.max_lines",
        [&](double v) { cfg.hough.max_lines = static_cast<int>(v); });
    num("brace.vert_tol_deg",
        [&](double v) { cfg.brace.vert_tol = v * M_PI / 180.0; });
    num("brace.horiz_tol_deg",
        [&](double v) { cfg.brace.horiz_tol = v * M_PI / 180.0; });
    num("brace.central_frac", [&](double v) { cfg.brace.central_frac = v; });
    num("brace.kmeans_restarts",
        [&](double v) { cfg.brace.kmeans_restarts = static_cast<int>(v); });
    num("brace.kmeans_max_iter",
        [&](double v) { cfg.brace.kmeans_max_iter = static_cast<int>(v); });
    num("brace.kmeans_tol", [&](double v) { cfg.brace.kmeans_tol = v; });
    num("brace.parallel_eps", [&](double v) { cfg.brace.parallel_eps = v; });
    num("synth.unit_width_mm", [&](double v) { cfg.synth.unit_width_mm = v; });
    num("synth.net_width_mm", [&](double v) { cfg.synth.net_width_mm = v; });
    num("synth.platform_width_mm",
        [&](double v) { cfg.synth.platform_width_mm = v; });
    num("synth.unit_height_mm", [&](double v) { cfg.synth.unit_height_mm = v; });
    num("synth.px_per_mm", [&](double v) { cfg.synth.px_per_mm = v; });
    num("synth.upright_thickness_px",
        [&](double v) { cfg.synth.upright_thickness_px = static_cast<int>(v); });
    num("synth.brace_thickness_px",
        [&](double v) { cfg.synth.brace_thickness_px = static_cast<int>(v); });
    num("synth.line_gray",
        [&](double v) { cfg.synth.line_gray = static_cast<int>(v); });
    num("seed", [&](double v) { cfg.seed = static_cast<std::uint64_t>(v); });
    setters["category"] = [&](const std::string& k, const std::string& v) {
        cfg.category = to_string_value(k, v);
    };

    for (const auto& [key, value] : kv) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("unknown key: " + key);
        it->second(key, value);
    }

    if (cfg.canny_low > cfg.canny_high)
        throw ConfigError("canny.low must be <= canny.high");
    if (cfg.brace.central_frac <= 0.0 || cfg.brace.central_frac > 1.0)
        throw ConfigError("brace.central_frac must be in (0, 1]");
    if (cfg.hough.rho_res <= 0.0 || cfg.hough.theta_res <= 0.0)
        throw ConfigError("hough resolutions must be positive");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "seed = " << cfg.seed << "\n";
    out << "category = \"" << cfg.category << "\"\n\n";
    out << "[canny]\nlow = " << cfg.canny_low << "\nhigh = " << cfg.canny_high
        << "\n\n";
    out << "[hough]\n"
        << "rho_res = " << cfg.hough.rho_res << "\n"
        << "theta_res_deg = " << cfg.hough.theta_res * 180.0 / M_PI << "\n"
        << "threshold_frac = " << cfg.hough.threshold_frac << "\n"
        << "threshold_abs = " << cfg.hough.threshold_abs << "\n"
        << "nms_rho = " << cfg.hough.nms_rho << "\n"
        << "nms_theta = " << cfg.hough.nms_theta << "\n"
        << "max_lines = " << cfg.hough.max_lines << "\n\n";
    out << "[brace]\n"
        << "vert_tol_deg = " << cfg.brace.vert_tol * 180.0 / M_PI << "\n"
        << "horiz_tol_deg = " << cfg.brace.horiz_tol * 180.0 / M_PI << "\n"
        << "central_frac = " << cfg.brace.central_frac << "\n"
        << "kmeans_restarts = " << cfg.brace.kmeans_restarts << "\n"
        << "kmeans_max_iter = " << cfg.brace.kmeans_max_iter << "\n"
        << "kmeans_tol = " << cfg.brace.kmeans_tol << "\n"
        << "parallel_eps = " << cfg.brace.parallel_eps << "\n\n";
    out << "[synth]\n"
        << "unit_width_mm = " << cfg.synth.unit_width_mm << "\n"
        << "net_width_mm = " << cfg.synth.net_width_mm << "\n"
        << "platform_width_mm = " << cfg.synth.platform_width_mm << "\n"
        << "unit_height_mm = " << cfg.synth.unit_height_mm << "\n"
        << "px_per_mm = " << cfg.synth.px_per_mm << "\n"
        << "upright_thickness_px = " << cfg.synth.upright_thickness_px << "\n"
        << "brace_thickness_px = " << cfg.synth.brace_thickness_px << "\n"
        << "line_gray = " << cfg.synth.line_gray << "\n";
    return out.str();
}

} // namespace scaffold
