#include "stablelab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "stablelab/report.hpp"

namespace stablelab {

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::symbol_check: return "symbol_check";
        case Experiment::solve_manufactured: return "solve_manufactured";
        case Experiment::apriori_battery: return "apriori_battery";
        case Experiment::krylov_battery: return "krylov_battery";
        case Experiment::feynman_kac: return "feynman_kac";
        case Experiment::local_krylov: return "local_krylov";
        case Experiment::convergence_study: return "convergence_study";
        case Experiment::constants: return "constants";
    }
    return "";
}

std::vector<Experiment> all_experiments() {
    return {Experiment::symbol_check,  Experiment::solve_manufactured, Experiment::apriori_battery,
            Experiment::krylov_battery, Experiment::feynman_kac,       Experiment::local_krylov,
            Experiment::convergence_study, Experiment::constants};
}

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& d : v) s += "\n  " + d;
    return s;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
    if (s == "inf") {
        out = std::numeric_limits<double>::infinity();
        return true;
    }
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

template <typename T>
bool parse_unsigned(const std::string& s, T& out) {
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end && !s.empty() && s[0] != '-';
}

using Setter = std::function<bool(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    auto real = [](double ExperimentConfig::*field) {
        return Setter([field](ExperimentConfig& c, const std::string& v) { return parse_double(v, c.*field); });
    };
    auto count = [](std::size_t ExperimentConfig::*field) {
        return Setter([field](ExperimentConfig& c, const std::string& v) { return parse_unsigned(v, c.*field); });
    };
    static const std::map<std::string, Setter> table = {
        {"experiment",
         [](ExperimentConfig& c, const std::string& v) {
             for (Experiment e : all_experiments())
                 if (experiment_name(e) == v) {
                     c.experiment = e;
                     return true;
                 }
             return false;
         }},
        {"alpha", real(&ExperimentConfig::alpha)},
        {"lam", real(&ExperimentConfig::lam)},
        {"mu", real(&ExperimentConfig::mu)},
        {"nu", real(&ExperimentConfig::nu)},
        {"K", real(&ExperimentConfig::K)},
        {"coefficient_preset",
         [](ExperimentConfig& c, const std::string& v) {
             const auto p = parse_preset(v);
             if (p) c.coefficient_preset = *p;
             return p.has_value();
         }},
        {"n_t", count(&ExperimentConfig::n_t)},
        {"n_x", count(&ExperimentConfig::n_x)},
        {"len_t", real(&ExperimentConfig::len_t)},
        {"len_x", real(&ExperimentConfig::len_x)},
        {"n_paths", count(&ExperimentConfig::n_paths)},
        {"dt", real(&ExperimentConfig::dt)},
        {"horizon", real(&ExperimentConfig::horizon)},
        {"x0", real(&ExperimentConfig::x0)},
        {"seed", [](ExperimentConfig& c, const std::string& v) { return parse_unsigned(v, c.seed); }},
        {"out_path",
         [](ExperimentConfig& c, const std::string& v) {
             c.out_path = v;
             return !v.empty();
         }},
        {"m", real(&ExperimentConfig::m)},
        {"m_cal", real(&ExperimentConfig::m_cal)},
        {"tol", real(&ExperimentConfig::tol)},
        {"n_list",
         [](ExperimentConfig& c, const std::string& v) {
             std::vector<int> out;
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ',')) {
                 int n = 0;
                 if (!parse_unsigned(trim(item), n)) return false;
                 out.push_back(n);
             }
             c.n_list = out;
             return !out.empty();
         }},
        {"resamples", count(&ExperimentConfig::resamples)},
    };
    return table;
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

ValidationError::ValidationError(std::vector<std::string> d)
    : ContractError("invalid configuration:" + join(d)), diagnostics(std::move(d)) {}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key=value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) {
            errors.push_back(key + ": unknown key (line " + std::to_string(lineno) + ")");
            continue;
        }
        if (!seen.insert(key).second) {
            errors.push_back(key + ": given more than once");
            continue;
        }
        if (!it->second(cfg, value)) errors.push_back(key + ": malformed value '" + value + "'");
    }
    if (!errors.empty()) throw ValidationError(errors);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError({"config: cannot read " + path});
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::vector<std::string> validate(const ExperimentConfig& c) {
    std::vector<std::string> d;
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(c.alpha > 1.0 && c.alpha <= 2.0)) d.push_back("alpha: must lie in (1, 2]");
    if (!(c.lam > 0.0) || !finite(c.lam)) d.push_back("lam: must be positive");
    if (!(c.mu > 0.0) || !finite(c.mu)) d.push_back("mu: must be positive");
    if (!(c.nu > 0.0) || !finite(c.nu)) d.push_back("nu: must be positive");
    if (c.mu > c.nu)
        d.push_back("mu, nu: mu (" + format_double(c.mu) + ") must not exceed nu (" + format_double(c.nu) + ")");
    if (!(c.K >= 0.0) || !finite(c.K)) d.push_back("K: must be nonnegative");
    if (!power_of_two(c.n_t)) d.push_back("n_t: must be a power of two");
    if (!power_of_two(c.n_x)) d.push_back("n_x: must be a power of two");
    if (!(c.len_t > 0.0) || !finite(c.len_t)) d.push_back("len_t: must be positive");
    if (!(c.len_x > 0.0) || !finite(c.len_x)) d.push_back("len_x: must be positive");
    if (c.n_paths < 2) d.push_back("n_paths: must be at least 2");
    if (!(c.dt > 0.0) || !finite(c.dt)) d.push_back("dt: must be positive");
    if (!(c.horizon > 0.0) || !finite(c.horizon)) d.push_back("horizon: must be positive");
    if (c.dt > 0.0 && c.horizon > 0.0) {
        const double r = c.horizon / c.dt;
        if (c.dt > c.horizon || std::abs(r - std::round(r)) > 1e-9 * r)
            d.push_back("dt, horizon: horizon must be a positive multiple of dt");
    }
    if (!finite(c.x0)) d.push_back("x0: must be finite");
    if (!(c.m > 0.0) || !finite(c.m)) d.push_back("m: must be positive");
    if (!(c.m_cal > 0.0)) d.push_back("m_cal: must be positive");
    if (!(c.tol > 0.0 && c.tol < 1.0)) d.push_back("tol: must lie in (0, 1)");
    if (c.n_list.size() < 2) d.push_back("n_list: needs at least two entries");
    for (std::size_t i = 0; i < c.n_list.size(); ++i)
        if (c.n_list[i] < 1 || (i > 0 && c.n_list[i] <= c.n_list[i - 1])) {
            d.push_back("n_list: entries must be positive and increasing");
            break;
        }
    if (c.resamples < 2) d.push_back("resamples: must be at least 2");
    if (c.experiment == Experiment::feynman_kac && !(c.horizon < 0.5 * c.len_t))
        d.push_back("horizon, len_t: the path horizon must lie inside the time box (horizon < len_t / 2)");
    if (c.coefficient_preset == Preset::checkerboard_b && c.experiment == Experiment::convergence_study &&
        !c.n_list.empty() && c.n_list.front() < 2)
        d.push_back("n_list: checkerboard smoothing needs n >= 2");
    return d;
}

void require_valid(const ExperimentConfig& cfg) {
    auto d = validate(cfg);
    if (!d.empty()) throw ValidationError(std::move(d));
}

std::string echo_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "experiment=" << experiment_name(c.experiment) << '\n'
       << "alpha=" << format_double(c.alpha) << '\n'
       << "lam=" << format_double(c.lam) << '\n'
       << "mu=" << format_double(c.mu) << '\n'
       << "nu=" << format_double(c.nu) << '\n'
       << "K=" << format_double(c.K) << '\n'
       << "coefficient_preset=" << preset_name(c.coefficient_preset) << '\n'
       << "n_t=" << c.n_t << '\n'
       << "n_x=" << c.n_x << '\n'
       << "len_t=" << format_double(c.len_t) << '\n'
       << "len_x=" << format_double(c.len_x) << '\n'
       << "n_paths=" << c.n_paths << '\n'
       << "dt=" << format_double(c.dt) << '\n'
       << "horizon=" << format_double(c.horizon) << '\n'
       << "x0=" << format_double(c.x0) << '\n'
       << "seed=" << c.seed << '\n'
       << "out_path=" << c.out_path << '\n'
       << "m=" << format_double(c.m) << '\n'
       << "m_cal=" << format_double(c.m_cal) << '\n'
       << "tol=" << format_double(c.tol) << '\n'
       << "n_list=";
    for (std::size_t i = 0; i < c.n_list.size(); ++i) os << (i ? "," : "") << c.n_list[i];
    os << '\n' << "resamples=" << c.resamples << '\n';
    return os.str();
}

}  // namespace stablelab
