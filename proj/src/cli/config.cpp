#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "twoscale/cli.hpp"
#include "twoscale/errors.hpp"
#include "twoscale/expr.hpp"

namespace twoscale::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

// Strips a trailing comment that is not inside quotes.
std::string strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (!quoted && line[i] == '#') return std::string(line.substr(0, i));
    }
    return std::string(line);
}

std::string unquote(const std::string& v, const std::string& key) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (v.find('"') != std::string::npos) throw ConfigError("unbalanced quotes in value of '" + key + "'");
    return v;
}

double number(const std::string& v, const std::string& key) {
    double d = 0.0;
    try {
        d = eval_constant(v);
    } catch (const Error& e) {
        throw ConfigError("value of '" + key + "' is not a number: " + e.what());
    }
    if (!std::isfinite(d)) throw ConfigError("value of '" + key + "' is not finite");
    return d;
}

int integer(const std::string& v, const std::string& key) {
    const double d = number(v, key);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError("value of '" + key + "' must be an integer");
    return static_cast<int>(d);
}

std::vector<double> number_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty entry in list '" + key + "'");
        out.push_back(number(item, key));
    }
    if (out.empty()) throw ConfigError("list '" + key + "' is empty");
    return out;
}

std::string expression(const std::string& v, const std::string& key) {
    try {
        (void)parse(v);
    } catch (const ParseError& e) {
        throw ConfigError("expression '" + key + "' does not parse: " + e.what());
    }
    return v;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

std::filesystem::path RunConfig::resolve(const std::string& file) const {
    const std::filesystem::path p(file);
    return p.is_absolute() ? p : base_dir / p;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig c;
    c.base_dir = base_dir;
    std::string section;
    std::map<std::string, int> seen;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "problem" && section != "discretization" && section != "sweep" && section != "output")
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        if (section.empty()) throw ConfigError(where + ": key outside of any section");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = unquote(trim(std::string_view(line).substr(eq + 1)), key);
        const std::string full = section + "." + key;
        if (seen[full]++) throw ConfigError(where + ": duplicate key '" + key + "' in [" + section + "]");

        if (section == "problem") {
            if (key == "f") c.f = expression(value, key);
            else if (key == "r") c.r = expression(value, key);
            else if (key == "r0") c.r0 = expression(value, key);
            else if (key == "chi") c.chi = expression(value, key);
            else if (key == "phi0") c.phi0 = expression(value, key);
            else if (key == "psi") c.psi = number_list(value, key);
            else if (key == "r0_file") c.r0_file = value;
            else if (key == "phi0_file") c.phi0_file = value;
            else if (key == "chi_file") c.chi_file = value;
            else if (key == "psi_file") c.psi_file = value;
            else if (key == "T") c.T = number(value, key);
            else if (key == "x0") c.x0 = number(value, key);
            else if (key == "t0") c.t0 = number(value, key);
            else throw ConfigError(where + ": unknown key '" + key + "' in [problem]");
        } else if (section == "discretization") {
            if (key == "N") c.N = integer(value, key);
            else if (key == "K") c.K = integer(value, key);
            else if (key == "M") c.M = integer(value, key);
            else if (key == "P") c.P = integer(value, key);
            else if (key == "oversample") c.oversample = integer(value, key);
            else if (key == "tol") c.tol = number(value, key);
            else throw ConfigError(where + ": unknown key '" + key + "' in [discretization]");
        } else if (section == "sweep") {
            if (key == "omega") c.omega = number_list(value, key);
            else throw ConfigError(where + ": unknown key '" + key + "' in [sweep]");
        } else {
            if (key == "dir") c.dir = value;
            else if (key == "prefix") c.prefix = value;
            else throw ConfigError(where + ": unknown key '" + key + "' in [output]");
        }
    }

    // Checks that hold for every command; per-command requirements are
    // checked where the fields are used.
    if (c.N < 1) throw ConfigError("N must be at least 1");
    if (c.K < 1) throw ConfigError("K must be at least 1");
    if (c.M < 2) throw ConfigError("M must be at least 2");
    if (c.P < 2) throw ConfigError("P must be at least 2");
    if (c.oversample < 20) throw ConfigError("oversample must be at least 20");
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
    if (c.T && !(*c.T > 0.0)) throw ConfigError("T must be positive");
    if (c.x0 && !(*c.x0 > 0.0 && *c.x0 < 3.141592653589793)) throw ConfigError("x0 must lie in (0, pi)");
    if (c.t0 && !(*c.t0 > 0.0)) throw ConfigError("t0 must be positive");
    if (c.t0 && c.T && *c.t0 > *c.T) throw ConfigError("t0 must not exceed T");
    for (std::size_t i = 0; i < c.omega.size(); ++i) {
        if (!(c.omega[i] > 0.0)) throw ConfigError("omega values must be positive");
        if (i > 0 && !(c.omega[i] > c.omega[i - 1])) throw ConfigError("omega values must be ascending");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

std::string render_config(const RunConfig& c) {
    std::ostringstream o;
    auto file = [&](const char* key, const std::optional<std::string>& v) {
        if (v) o << key << " = " << quoted(std::filesystem::absolute(c.resolve(*v)).lexically_normal().string()) << "\n";
    };
    o << "[problem]\n";
    if (c.f) o << "f = " << quoted(*c.f) << "\n";
    if (c.r) o << "r = " << quoted(*c.r) << "\n";
    if (c.r0) o << "r0 = " << quoted(*c.r0) << "\n";
    if (c.chi) o << "chi = " << quoted(*c.chi) << "\n";
    if (c.phi0) o << "phi0 = " << quoted(*c.phi0) << "\n";
    if (c.psi) {
        o << "psi = ";
        for (std::size_t i = 0; i < c.psi->size(); ++i) o << (i ? ", " : "") << format_number((*c.psi)[i]);
        o << "\n";
    }
    file("r0_file", c.r0_file);
    file("phi0_file", c.phi0_file);
    file("chi_file", c.chi_file);
    file("psi_file", c.psi_file);
    if (c.T) o << "T = " << format_number(*c.T) << "\n";
    if (c.x0) o << "x0 = " << format_number(*c.x0) << "\n";
    if (c.t0) o << "t0 = " << format_number(*c.t0) << "\n";
    o << "\n[discretization]\n";
    o << "N = " << c.N << "\nK = " << c.K << "\nM = " << c.M << "\nP = " << c.P << "\n";
    o << "oversample = " << c.oversample << "\ntol = " << format_number(c.tol) << "\n";
    o << "\n[sweep]\n";
    if (!c.omega.empty()) {
        o << "omega = ";
        for (std::size_t i = 0; i < c.omega.size(); ++i) o << (i ? ", " : "") << format_number(c.omega[i]);
        o << "\n";
    }
    o << "\n[output]\n";
    o << "dir = " << quoted(c.dir) << "\n";
    o << "prefix = " << quoted(c.prefix) << "\n";
    return o.str();
}

}  // namespace twoscale::cli
