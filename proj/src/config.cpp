#include "qes/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qes/errors.hpp"
#include "qes/format.hpp"

namespace qes {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::optional<double> parse_double(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    const char* begin = t.c_str();
    if (*begin == '+') ++begin;  // from_chars rejects a leading plus
    double value = 0.0;
    const auto res = std::from_chars(begin, t.c_str() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.c_str() + t.size()) return std::nullopt;
    return value;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(trim(current));
    return parts;
}

/// Collects raw key/value pairs and typed extraction errors; every error
/// carries the dotted field path it refers to.
class KeyValueReader {
public:
    explicit KeyValueReader(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) {
                error("line " + std::to_string(lineno), "expected 'key = value'");
                continue;
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) {
                error("line " + std::to_string(lineno), "empty key");
                continue;
            }
            if (values_.count(key)) {
                error(key, "duplicate key");
                continue;
            }
            values_[key] = value;
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::optional<std::string> get_string(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        consumed_.insert(key);
        return it->second;
    }

    std::optional<double> get_double(const std::string& key) {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        auto v = parse_double(*raw);
        if (!v) error(key, "not a number: '" + *raw + "'");
        return v;
    }

    std::optional<int> get_int(const std::string& key) {
        auto v = get_double(key);
        if (!v) return std::nullopt;
        if (*v != std::floor(*v)) {
            error(key, "not an integer");
            return std::nullopt;
        }
        return static_cast<int>(*v);
    }

    std::optional<bool> get_bool(const std::string& key) {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        if (*raw == "true" || *raw == "1") return true;
        if (*raw == "false" || *raw == "0") return false;
        error(key, "not a boolean: '" + *raw + "'");
        return std::nullopt;
    }

    std::optional<std::vector<double>> get_double_list(const std::string& key) {
        auto raw = get_string(key);
        if (!raw) return std::nullopt;
        std::vector<double> out;
        for (const std::string& part : split_list(*raw)) {
            auto v = parse_double(part);
            if (!v) {
                error(key, "not a number: '" + part + "'");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        return out;
    }

    void error(const std::string& path, const std::string& what) {
        errors_.push_back(path + ": " + what);
    }

    void require_all_consumed() {
        for (const auto& [key, value] : values_)
            if (!consumed_.count(key)) errors_.push_back(key + ": unknown key");
    }

    void throw_if_errors() const {
        if (errors_.empty()) return;
        std::string msg = "config error";
        for (const auto& e : errors_) msg += "\n  " + e;
        throw config_error(msg);
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
    std::vector<std::string> errors_;
};

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    std::string t = trim(text);
    if (t.empty()) throw config_error("empty complex literal");
    if (t.back() != 'i') {
        auto v = parse_double(t);
        if (!v) throw config_error("bad complex literal '" + text + "'");
        return {*v, 0.0};
    }
    t.pop_back();  // drop the 'i'
    // find the sign separating real and imaginary parts (not a leading sign,
    // not an exponent sign)
    std::size_t split = std::string::npos;
    for (std::size_t i = t.size(); i-- > 1;) {
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto parse_signed_unit = [&](const std::string& part) -> std::optional<double> {
        if (part.empty() || part == "+") return 1.0;
        if (part == "-") return -1.0;
        return parse_double(part);
    };
    if (split == std::string::npos) {
        auto im = parse_signed_unit(t);
        if (!im) throw config_error("bad complex literal '" + text + "'");
        return {0.0, *im};
    }
    auto re = parse_double(t.substr(0, split));
    auto im = parse_signed_unit(t.substr(split));
    if (!re || !im) throw config_error("bad complex literal '" + text + "'");
    return {*re, *im};
}

RunConfig parse_config_text(const std::string& text) {
    KeyValueReader reader(text);
    RunConfig cfg;

    // --- params ---
    if (!reader.has("params.n")) {
        reader.error("params.n", "required");
    } else if (auto n = reader.get_int("params.n")) {
        if (*n < 0)
            reader.error("params.n", "must be a non-negative integer");
        else
            cfg.params.n = *n;
    }
    if (!reader.has("params.k")) {
        reader.error("params.k", "required");
    } else if (auto k = reader.get_double("params.k")) {
        if (!(*k >= 0.0))
            reader.error("params.k", "must be >= 0");
        else
            cfg.params.k = *k;
    }
    if (!reader.has("params.beta")) {
        reader.error("params.beta", "required");
    } else if (auto beta = reader.get_double("params.beta")) {
        cfg.params.beta = *beta;
    }

    // --- pump ---
    bool pump_ok = false;
    if (auto kind = reader.get_string("pump.kind")) {
        auto need = [&](const char* key) -> double {
            if (!reader.has(key)) {
                reader.error(key, "required for pump.kind = " + *kind);
                return 1.0;
            }
            if (auto v = reader.get_double(key)) return *v;
            return 1.0;
        };
        if (*kind == "constant") {
            cfg.pump = PumpProfile::constant(need("pump.u0"));
            pump_ok = true;
        } else if (*kind == "exponential") {
            const double u0 = need("pump.u0");
            cfg.pump = PumpProfile::exponential(u0, need("pump.alpha"));
            pump_ok = true;
        } else if (*kind == "sinusoidal") {
            const double a = need("pump.a");
            const double b = need("pump.b");
            cfg.pump = PumpProfile::sinusoidal(a, b, need("pump.omega"));
            pump_ok = true;
        } else if (*kind == "rational") {
            const double u0 = need("pump.u0");
            cfg.pump = PumpProfile::rational(u0, need("pump.gamma"));
            pump_ok = true;
        } else {
            reader.error("pump.kind", "unknown kind '" + *kind + "'");
        }
    } else {
        reader.error("pump.kind", "required");
    }
    if (!reader.has("pump.horizon")) {
        reader.error("pump.horizon", "required");
    } else if (auto horizon = reader.get_double("pump.horizon")) {
        if (!(*horizon > 0.0))
            reader.error("pump.horizon", "must be > 0");
        else
            cfg.horizon = *horizon;
    }
    if (pump_ok) {
        try {
            cfg.pump.validate_on(cfg.horizon);
        } catch (const std::domain_error& err) {
            reader.error("pump", err.what());
            pump_ok = false;
        }
    }

    // --- grid ---
    if (auto points = reader.get_int("grid.points")) {
        if (*points < 5)
            reader.error("grid.points", "must be >= 5");
        else
            cfg.grid_points = *points;
    }
    if (pump_ok) cfg.x_max = truncation_radius(cfg.pump, cfg.horizon);
    if (auto xmax = reader.get_double("grid.x_max")) {
        if (!(*xmax > 0.0))
            reader.error("grid.x_max", "must be > 0");
        else {
            cfg.x_max = *xmax;
            cfg.x_max_overridden = true;
        }
    }
    cfg.x_min = (cfg.params.k == 0.0) ? 0.0 : cfg.x_max / cfg.grid_points;
    if (auto xmin = reader.get_double("grid.x_min")) {
        if (!(*xmin < cfg.x_max))
            reader.error("grid.x_min", "must be < grid.x_max");
        else if (cfg.params.k != 0.0 && !(*xmin > 0.0))
            reader.error("grid.x_min", "must be > 0 when params.k > 0");
        else {
            cfg.x_min = *xmin;
            cfg.x_min_overridden = true;
        }
    }

    // --- superposition ---
    std::vector<int> modes{0};
    std::vector<std::complex<double>> weights{{1.0, 0.0}};
    if (auto raw = reader.get_double_list("superposition.modes")) {
        modes.clear();
        for (double v : *raw) {
            if (v != std::floor(v) || v < 0) {
                reader.error("superposition.modes", "modes must be non-negative integers");
                break;
            }
            modes.push_back(static_cast<int>(v));
        }
    }
    if (auto raw = reader.get_string("superposition.weights")) {
        weights.clear();
        for (const std::string& part : split_list(*raw)) {
            try {
                weights.push_back(parse_complex(part));
            } catch (const config_error& err) {
                reader.error("superposition.weights", err.what());
                break;
            }
        }
    }
    if (modes.size() != weights.size()) {
        reader.error("superposition.weights", "count differs from superposition.modes");
    } else {
        cfg.superposition.terms.clear();
        for (std::size_t i = 0; i < modes.size(); ++i)
            cfg.superposition.terms.push_back({modes[i], weights[i]});
        try {
            cfg.superposition.validate(cfg.params.n);
        } catch (const std::domain_error& err) {
            reader.error("superposition.modes", err.what());
        }
    }

    if (auto dir = reader.get_string("output.dir")) cfg.output_dir = *dir;

    // --- wave ---
    if (auto times = reader.get_double_list("wave.times")) {
        cfg.wave_times = *times;
        for (double t : cfg.wave_times)
            if (t < 0.0 || t > cfg.horizon) {
                reader.error("wave.times", "times must lie in [0, pump.horizon]");
                break;
            }
    }

    // --- verify ---
    cfg.verify_t = 0.5 * cfg.horizon;
    if (auto t = reader.get_double("verify.t")) cfg.verify_t = *t;
    if (auto dx = reader.get_double("verify.dx")) {
        if (!(*dx > 0.0))
            reader.error("verify.dx", "must be > 0");
        else
            cfg.verify_dx = *dx;
    }
    if (auto dtau = reader.get_double("verify.dtau")) {
        if (!(*dtau > 0.0))
            reader.error("verify.dtau", "must be > 0");
        else
            cfg.verify_dtau = *dtau;
    }
    if (auto levels = reader.get_int("verify.levels")) {
        if (*levels < 1)
            reader.error("verify.levels", "must be >= 1");
        else
            cfg.verify_levels = *levels;
    }
    const double coarsest_dtau = cfg.verify_dtau * std::pow(2.0, cfg.verify_levels - 1);
    if (cfg.verify_t - 2.0 * coarsest_dtau < 0.0 ||
        cfg.verify_t + 2.0 * coarsest_dtau > cfg.horizon)
        reader.error("verify.t", "time stencil leaves [0, pump.horizon] at the coarsest level");
    cfg.verify_x_lo = (cfg.params.k == 0.0) ? -cfg.x_max : 0.25;
    cfg.verify_x_hi = cfg.x_max;
    if (auto lo = reader.get_double("verify.x_lo")) cfg.verify_x_lo = *lo;
    if (auto hi = reader.get_double("verify.x_hi")) cfg.verify_x_hi = *hi;
    if (!(cfg.verify_x_lo < cfg.verify_x_hi))
        reader.error("verify.x_lo", "residual window is empty");
    else if (cfg.params.k != 0.0 && cfg.verify_x_lo <= 0.0)
        reader.error("verify.x_lo", "must be > 0 when params.k > 0");

    // --- propagate ---
    cfg.prop_t1 = cfg.horizon;
    if (auto t0 = reader.get_double("propagate.t0")) cfg.prop_t0 = *t0;
    if (auto t1 = reader.get_double("propagate.t1")) cfg.prop_t1 = *t1;
    if (!(cfg.prop_t0 >= 0.0) || !(cfg.prop_t1 <= cfg.horizon) || !(cfg.prop_t0 < cfg.prop_t1))
        reader.error("propagate.t0", "need 0 <= t0 < t1 <= pump.horizon");
    if (auto steps = reader.get_int("propagate.steps")) {
        if (*steps < 100)
            reader.error("propagate.steps", "must be >= 100");
        else
            cfg.prop_steps = *steps;
    }
    if (auto cp = reader.get_int("propagate.checkpoints")) {
        if (*cp < 1)
            reader.error("propagate.checkpoints", "must be >= 1");
        else
            cfg.prop_checkpoints = *cp;
    }
    if (auto smoke = reader.get_bool("propagate.smoke")) cfg.prop_smoke = *smoke;

    // --- tolerances ---
    auto tol = [&](const char* key, double& slot) {
        if (auto v = reader.get_double(key)) {
            if (!(*v > 0.0))
                reader.error(key, "must be > 0");
            else
                slot = *v;
        }
    };
    tol("tolerances.eigen_residual", cfg.tol.eigen_residual);
    tol("tolerances.residual_max", cfg.tol.residual_max);
    tol("tolerances.slope_min", cfg.tol.slope_min);
    tol("tolerances.residual_floor", cfg.tol.residual_floor);
    tol("tolerances.mutation_plateau", cfg.tol.mutation_plateau);
    tol("tolerances.norm_drift", cfg.tol.norm_drift);
    tol("tolerances.gram_offdiag", cfg.tol.gram_offdiag);
    tol("tolerances.discrete_gram_offdiag", cfg.tol.discrete_gram_offdiag);
    tol("tolerances.cn_norm_drift", cfg.tol.cn_norm_drift);
    tol("tolerances.fidelity_min", cfg.tol.fidelity_min);
    tol("tolerances.smoke_norm_drift", cfg.tol.smoke_norm_drift);

    reader.require_all_consumed();
    reader.throw_if_errors();
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("params.n", std::to_string(params.n));
    kv.emplace_back("params.k", format_double(params.k));
    kv.emplace_back("params.beta", format_double(params.beta));
    kv.emplace_back("pump.kind", to_string(pump.kind()));
    switch (pump.kind()) {
        case PumpKind::constant:
            kv.emplace_back("pump.u0", format_double(pump.p0()));
            break;
        case PumpKind::exponential:
            kv.emplace_back("pump.u0", format_double(pump.p0()));
            kv.emplace_back("pump.alpha", format_double(pump.p1()));
            break;
        case PumpKind::sinusoidal:
            kv.emplace_back("pump.a", format_double(pump.p0()));
            kv.emplace_back("pump.b", format_double(pump.p1()));
            kv.emplace_back("pump.omega", format_double(pump.p2()));
            break;
        case PumpKind::rational:
            kv.emplace_back("pump.u0", format_double(pump.p0()));
            kv.emplace_back("pump.gamma", format_double(pump.p1()));
            break;
    }
    kv.emplace_back("pump.horizon", format_double(horizon));
    kv.emplace_back("grid.points", std::to_string(grid_points));
    kv.emplace_back("grid.x_min", format_double(x_min));
    kv.emplace_back("grid.x_max", format_double(x_max));
    std::string modes, weights;
    for (std::size_t i = 0; i < superposition.terms.size(); ++i) {
        if (i) {
            modes += ",";
            weights += ",";
        }
        modes += std::to_string(superposition.terms[i].mode);
        weights += format_complex(superposition.terms[i].weight);
    }
    kv.emplace_back("superposition.modes", modes);
    kv.emplace_back("superposition.weights", weights);
    kv.emplace_back("output.dir", output_dir);
    kv.emplace_back("wave.times", join_doubles(wave_times));
    kv.emplace_back("verify.t", format_double(verify_t));
    kv.emplace_back("verify.dx", format_double(verify_dx));
    kv.emplace_back("verify.dtau", format_double(verify_dtau));
    kv.emplace_back("verify.levels", std::to_string(verify_levels));
    kv.emplace_back("verify.x_lo", format_double(verify_x_lo));
    kv.emplace_back("verify.x_hi", format_double(verify_x_hi));
    kv.emplace_back("propagate.t0", format_double(prop_t0));
    kv.emplace_back("propagate.t1", format_double(prop_t1));
    kv.emplace_back("propagate.steps", std::to_string(prop_steps));
    kv.emplace_back("propagate.checkpoints", std::to_string(prop_checkpoints));
    kv.emplace_back("propagate.smoke", prop_smoke ? "true" : "false");
    return kv;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved_tolerances() const {
    return {
        {"eigen_residual", format_double(tol.eigen_residual)},
        {"residual_max", format_double(tol.residual_max)},
        {"slope_min", format_double(tol.slope_min)},
        {"residual_floor", format_double(tol.residual_floor)},
        {"mutation_plateau", format_double(tol.mutation_plateau)},
        {"norm_drift", format_double(tol.norm_drift)},
        {"gram_offdiag", format_double(tol.gram_offdiag)},
        {"discrete_gram_offdiag", format_double(tol.discrete_gram_offdiag)},
        {"cn_norm_drift", format_double(tol.cn_norm_drift)},
        {"fidelity_min", format_double(tol.fidelity_min)},
        {"smoke_norm_drift", format_double(tol.smoke_norm_drift)},
    };
}

}  // namespace qes
