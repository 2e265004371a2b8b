#include "qbatt/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qbatt/parallel.hpp"

namespace qbatt::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw std::invalid_argument(what + ": cannot parse number '" + s + "'");
    }
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw std::invalid_argument(what + ": cannot parse integer '" + s + "'");
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

RangeSpec RangeSpec::parse(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw std::invalid_argument("range: expected lo:hi:points, got '" + text + "'");
    }
    RangeSpec r;
    r.lo = parse_double(text.substr(0, c1), "range lo");
    r.hi = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "range hi");
    r.points = parse_int(text.substr(c2 + 1), "range points");
    if (r.points < 2) throw std::invalid_argument("range: points must be >= 2");
    if (!(r.hi > r.lo)) throw std::invalid_argument("range: hi must exceed lo");
    return r;
}

std::string RangeSpec::to_string() const {
    return fmt17(lo) + ":" + fmt17(hi) + ":" + std::to_string(points);
}

std::vector<double> RangeSpec::grid() const {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
        v[i] = lo + (hi - lo) * (double)i / (double)(points - 1);
    }
    v.back() = hi;
    return v;
}

std::string format_n_list(const std::vector<int>& ns) {
    std::string out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ns[i]);
    }
    return out;
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(parse_int(item, "n_list"));
    }
    if (out.empty()) throw std::invalid_argument("n_list: no entries in '" + text + "'");
    return out;
}

void RunConfig::apply(const std::string& key, const std::string& value) {
    if (key == "n") {
        n_atoms = parse_int(value, key);
    } else if (key == "amp") {
        amp = parse_double(value, key);
    } else if (key == "omega") {
        omega = parse_double(value, key);
    } else if (key == "lambda") {
        lambda = parse_double(value, key);
    } else if (key == "protocol") {
        if (value != "locked" && value != "fixed") {
            throw std::invalid_argument("protocol: expected locked|fixed, got '" + value + "'");
        }
        protocol = value;
    } else if (key == "mode") {
        if (value != "analytic" && value != "numeric") {
            throw std::invalid_argument("mode: expected analytic|numeric, got '" + value + "'");
        }
        mode = value;
    } else if (key == "t_range") {
        t_range = RangeSpec::parse(value);
    } else if (key == "a_range") {
        a_range = RangeSpec::parse(value);
    } else if (key == "omega_range") {
        omega_range = RangeSpec::parse(value);
    } else if (key == "lambda_range") {
        lambda_range = RangeSpec::parse(value);
    } else if (key == "n_list") {
        n_list = parse_n_list(value);
    } else if (key == "workers") {
        workers = parse_int(value, key);
    } else if (key == "out") {
        out = value;
    } else if (key == "quick") {
        quick = (value == "1" || value == "true");
    } else if (key == "perturb_bessel") {
        perturb_bessel = parse_double(value, key);
    } else {
        throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

void RunConfig::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        }
        try {
            apply(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
}

std::string RunConfig::to_file_text() const {
    std::string s;
    s += "n = " + std::to_string(n_atoms) + "\n";
    s += "amp = " + fmt17(amp) + "\n";
    s += "omega = " + fmt17(omega) + "\n";
    s += "lambda = " + fmt17(lambda) + "\n";
    s += "protocol = " + protocol + "\n";
    s += "mode = " + mode + "\n";
    s += "t_range = " + t_range.to_string() + "\n";
    s += "a_range = " + a_range.to_string() + "\n";
    s += "omega_range = " + omega_range.to_string() + "\n";
    s += "lambda_range = " + lambda_range.to_string() + "\n";
    if (!n_list.empty()) s += "n_list = " + format_n_list(n_list) + "\n";
    s += "workers = " + std::to_string(workers) + "\n";
    if (!out.empty()) s += "out = " + out + "\n";
    if (quick) s += "quick = 1\n";
    if (perturb_bessel != 0.0) s += "perturb_bessel = " + fmt17(perturb_bessel) + "\n";
    return s;
}

void RunConfig::save_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("config: cannot write '" + path + "'");
    f << to_file_text();
}

int RunConfig::resolved_workers() const {
    return workers >= 1 ? workers : default_workers();
}

void RunConfig::validate_common() const {
    if (n_atoms < 1) throw std::invalid_argument("n must be >= 1");
    if (amp < 0.0) throw std::invalid_argument("amp must be >= 0");
    if (protocol == "fixed" && !(omega > 0.0)) {
        throw std::invalid_argument("protocol fixed requires omega > 0");
    }
}

}  // namespace qbatt::cli
