#include "pmuobs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "pmuobs/csv.hpp"
#include "pmuobs/errors.hpp"

namespace pmuobs {

namespace {

struct Entry {
    std::string value;
    int line;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("empty numeric value", line);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw ConfigError("malformed number '" + v + "'", line);
    if (!std::isfinite(x))
        throw ConfigError("non-finite number '" + v + "'", line);
    return x;
}

bool parse_bool(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("expected true or false, got '" + v + "'", line);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<double> parse_number_list(const std::string& raw, int line) {
    std::vector<double> out;
    for (const auto& tok : split(raw, ',')) out.push_back(parse_number(tok, line));
    return out;
}

PiecewiseConstant parse_signal(const std::string& raw, int line) {
    const auto toks = split(raw, ',');
    std::vector<double> times, values;
    for (const auto& tok : toks) {
        const std::string t = trim(tok);
        const auto colon = t.find(':');
        if (colon == std::string::npos) {
            if (toks.size() != 1)
                throw ConfigError("piecewise entries must be time:value pairs", line);
            return PiecewiseConstant(parse_number(t, line));
        }
        times.push_back(parse_number(t.substr(0, colon), line));
        values.push_back(parse_number(t.substr(colon + 1), line));
    }
    if (times.empty()) throw ConfigError("empty signal value", line);
    if (times.front() != 0.0)
        throw ConfigError("piecewise signal must start at time 0", line);
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw ConfigError("piecewise knot times must be strictly increasing", line);
    return PiecewiseConstant(std::move(times), std::move(values));
}

class ConfigMap {
public:
    explicit ConfigMap(const std::string& text) {
        std::istringstream is(text);
        std::string raw;
        int line = 0;
        std::string section;
        while (std::getline(is, raw)) {
            ++line;
            const auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            const std::string s = trim(raw);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw ConfigError("malformed section header '" + s + "'", line);
                section = trim(s.substr(1, s.size() - 2));
                if (!known_sections().count(section))
                    throw ConfigError("unknown section [" + section + "]", line);
                if (sections_.count(section))
                    throw ConfigError("duplicate section [" + section + "]", line);
                sections_[section] = {};
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value', got '" + s + "'", line);
            if (section.empty())
                throw ConfigError("key outside of any section", line);
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty()) throw ConfigError("empty key", line);
            auto& sec = sections_[section];
            if (sec.count(key))
                throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line);
            if (!known_keys(section).count(key))
                throw ConfigError("unknown key '" + key + "' in [" + section + "]", line);
            sec[key] = Entry{value, line};
        }
    }

    bool has_section(const std::string& s) const { return sections_.count(s) != 0; }

    const Entry* find(const std::string& sec, const std::string& key) const {
        auto it = sections_.find(sec);
        if (it == sections_.end()) return nullptr;
        auto jt = it->second.find(key);
        if (jt == it->second.end()) return nullptr;
        return &jt->second;
    }

    const Entry& require(const std::string& sec, const std::string& key,
                         std::vector<std::string>& missing) const {
        static const Entry none{"", 0};
        const Entry* e = find(sec, key);
        if (!e) {
            missing.push_back("[" + sec + "] " + key);
            return none;
        }
        return *e;
    }

    bool empty() const { return sections_.empty(); }

    static const std::set<std::string>& known_sections() {
        static const std::set<std::string> s = {
            "machine", "coefficients", "initial", "inputs", "observers",
            "filters", "sim", "output", "sweep", "verify"};
        return s;
    }

    static const std::set<std::string>& known_keys(const std::string& section) {
        static const std::map<std::string, std::set<std::string>> k = {
            {"machine", {"D", "H", "Td0p", "Tq0p", "xd", "xdp", "xq", "xqp", "omega0"}},
            {"coefficients", {"a0", "b0", "a1", "b1", "c1", "a2", "b2", "x_qp"}},
            {"initial", {"x1", "x2", "x3", "x4"}},
            {"inputs", {"u1", "u2", "y1_bus", "y2_bus"}},
            {"observers",
             {"drem", "overparam", "gradient", "gamma1", "gamma2",
              "drem_full_diagnostics", "overparam_gain", "gradient_gain",
              "gradient_init_offset", "angle_mode"}},
            {"filters", {"d"}},
            {"sim", {"h", "T"}},
            {"output", {"dir", "prefix", "columns"}},
            {"sweep", {"gamma", "overparam_gain", "gradient_gain"}},
            {"verify", {"suite", "samples", "seed", "range"}},
        };
        auto it = k.find(section);
        static const std::set<std::string> none;
        return it == k.end() ? none : it->second;
    }

private:
    std::map<std::string, Section> sections_;
};

std::vector<double> parse_sweep_list(const Entry& e) {
    const auto vals = parse_number_list(e.value, e.line);
    if (vals.empty()) throw ConfigError("empty sweep list", e.line);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(vals[i] > 0.0))
            throw ConfigError("sweep values must be positive", e.line);
        if (i > 0 && !(vals[i] > vals[i - 1]))
            throw ConfigError("sweep values must be strictly increasing", e.line);
    }
    return vals;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& name) {
    const ConfigMap cm(text);
    RunConfig cfg;
    cfg.name = name;
    cfg.output.prefix = name;

    if (cm.empty())
        throw ConfigError(
            "empty config; required: [coefficients] a0,b0,a1,b1,c1,a2,b2,x_qp "
            "(or a full [machine] section), [initial] x1,x2,x3,x4, [sim] T");

    for (const char* sec : {"machine", "coefficients", "initial", "inputs",
                            "observers", "filters", "sim"})
        if (cm.has_section(sec)) cfg.scenario_present = true;

    if (cfg.scenario_present) {
        Scenario& s = cfg.scenario;
        std::vector<std::string> missing;

        const bool have_machine = cm.has_section("machine");
        const bool have_coeffs = cm.has_section("coefficients");
        if (!have_machine && !have_coeffs)
            throw ConfigError("missing parameter source: provide [coefficients] or [machine]");

        if (have_machine) {
            for (const char* k : {"D", "H", "Td0p", "Tq0p", "xd", "xdp", "xq", "xqp", "omega0"})
                cm.require("machine", k, missing);
        }
        if (have_coeffs) {
            for (const char* k : {"a0", "b0", "a1", "b1", "c1", "a2", "b2", "x_qp"})
                cm.require("coefficients", k, missing);
        }
        if (!missing.empty()) {
            std::string msg = "missing required keys:";
            for (const auto& m : missing) msg += " " + m;
            throw ConfigError(msg);
        }
        if (have_machine) {
            MachineParams mp;
            const auto mnum = [&](const char* k) {
                const Entry* e = cm.find("machine", k);
                return parse_number(e->value, e->line);
            };
            mp.D = mnum("D");
            mp.H = mnum("H");
            mp.Td0p = mnum("Td0p");
            mp.Tq0p = mnum("Tq0p");
            mp.xd = mnum("xd");
            mp.xdp = mnum("xdp");
            mp.xq = mnum("xq");
            mp.xqp = mnum("xqp");
            mp.omega0 = mnum("omega0");
            // Validates the physical parameters even when direct coefficients
            // take precedence below.
            const DerivedCoefficients derived = derive_coefficients(mp);
            s.coeffs = derived;
            s.x_qp = mp.xqp;
        }
        if (have_coeffs) {
            const auto num = [&](const char* k) {
                const Entry* e = cm.find("coefficients", k);
                return parse_number(e->value, e->line);
            };
            s.coeffs.a0 = num("a0");
            s.coeffs.b0 = num("b0");
            s.coeffs.a1 = num("a1");
            s.coeffs.b1 = num("b1");
            s.coeffs.c1 = num("c1");
            s.coeffs.a2 = num("a2");
            s.coeffs.b2 = num("b2");
            s.x_qp = num("x_qp");
            validate_coefficients(s.coeffs);
        }

        for (const char* k : {"x1", "x2", "x3", "x4"})
            cm.require("initial", k, missing);
        cm.require("sim", "T", missing);
        if (!missing.empty()) {
            std::string msg = "missing required keys:";
            for (const auto& m : missing) msg += " " + m;
            throw ConfigError(msg);
        }
        const auto init = [&](const char* k) {
            const Entry* e = cm.find("initial", k);
            return parse_number(e->value, e->line);
        };
        s.x0.x1 = init("x1");
        s.x0.x2 = init("x2");
        s.x0.x3 = init("x3");
        s.x0.x4 = init("x4");

        if (const Entry* e = cm.find("inputs", "u1")) s.u1 = parse_signal(e->value, e->line);
        if (const Entry* e = cm.find("inputs", "u2")) s.u2 = parse_signal(e->value, e->line);
        if (const Entry* e = cm.find("inputs", "y1_bus"))
            s.y1_bus = parse_signal(e->value, e->line);
        if (const Entry* e = cm.find("inputs", "y2_bus"))
            s.y2_bus = parse_signal(e->value, e->line);

        if (const Entry* e = cm.find("observers", "drem"))
            s.drem_enabled = parse_bool(e->value, e->line);
        if (const Entry* e = cm.find("observers", "overparam"))
            s.overparam_enabled = parse_bool(e->value, e->line);
        if (const Entry* e = cm.find("observers", "gradient"))
            s.gradient_enabled = parse_bool(e->value, e->line);
        if (const Entry* e = cm.find("observers", "gamma1"))
            s.gamma1 = parse_number(e->value, e->line);
        if (const Entry* e = cm.find("observers", "gamma2"))
            s.gamma2 = parse_number(e->value, e->line);
        if (const Entry* e = cm.find("observers", "drem_full_diagnostics"))
            s.drem_full_diagnostics = parse_bool(e->value, e->line);
        if (const Entry* e = cm.find("observers", "overparam_gain"))
            s.overparam_gain = parse_number(e->value, e->line);
        if (const Entry* e = cm.find("observers", "gradient_gain"))
            s.gradient_gain = parse_number(e->value, e->line);
        if (const Entry* e = cm.find("observers", "gradient_init_offset"))
            s.gradient_init_offset = parse_number(e->value, e->line);
        if (const Entry* e = cm.find("observers", "angle_mode")) {
            const std::string v = trim(e->value);
            if (v == "arcsin") s.angle_mode = AngleMode::Arcsin;
            else if (v == "atan2") s.angle_mode = AngleMode::Atan2;
            else throw ConfigError("angle_mode must be arcsin or atan2", e->line);
        }

        if (const Entry* e = cm.find("filters", "d")) {
            const auto vals = parse_number_list(e->value, e->line);
            if (vals.size() != 4)
                throw ConfigError("filters d needs exactly four poles", e->line);
            for (int i = 0; i < 4; ++i) s.d[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(i)];
            validate_poles(s.d);
        }

        if (const Entry* e = cm.find("sim", "h")) s.h = parse_number(e->value, e->line);
        {
            const Entry* e = cm.find("sim", "T");
            s.T = parse_number(e->value, e->line);
        }
        s.validate();
    }

    if (cm.has_section("output")) {
        if (const Entry* e = cm.find("output", "dir")) cfg.output.dir = trim(e->value);
        if (const Entry* e = cm.find("output", "prefix")) cfg.output.prefix = trim(e->value);
        if (const Entry* e = cm.find("output", "columns")) {
            const std::string v = trim(e->value);
            if (v == "all") {
                cfg.output.columns_all = true;
            } else if (v != "default") {
                for (const auto& tok : split(v, ',')) {
                    const std::string col = trim(tok);
                    if (!is_known_column(col))
                        throw ConfigError("unknown output column '" + col + "'", e->line);
                    cfg.output.columns.push_back(col);
                }
                if (cfg.output.columns.empty())
                    throw ConfigError("empty column selection", e->line);
            }
        }
    }

    if (cm.has_section("sweep")) {
        if (!cfg.scenario_present)
            throw ConfigError("[sweep] requires a scenario in the same config");
        if (const Entry* e = cm.find("sweep", "gamma")) {
            cfg.sweep.gamma = parse_sweep_list(*e);
            if (!cfg.scenario.drem_enabled)
                throw ConfigError("sweep gamma requires observers drem = true", e->line);
        }
        if (const Entry* e = cm.find("sweep", "overparam_gain")) {
            cfg.sweep.overparam_gain = parse_sweep_list(*e);
            if (!cfg.scenario.overparam_enabled)
                throw ConfigError("sweep overparam_gain requires observers overparam = true",
                                  e->line);
        }
        if (const Entry* e = cm.find("sweep", "gradient_gain")) {
            cfg.sweep.gradient_gain = parse_sweep_list(*e);
            if (!cfg.scenario.gradient_enabled)
                throw ConfigError("sweep gradient_gain requires observers gradient = true",
                                  e->line);
        }
        if (!cfg.sweep.any())
            throw ConfigError("[sweep] section present but no sweep lists given");
    }

    if (cm.has_section("verify")) {
        cfg.verify.present = true;
        const Entry* suite = cm.find("verify", "suite");
        if (!suite) throw ConfigError("[verify] requires suite = lemma1 | drem");
        const std::string v = trim(suite->value);
        if (v != "lemma1" && v != "drem")
            throw ConfigError("verify suite must be lemma1 or drem", suite->line);
        cfg.verify.suite = v;
        if (const Entry* e = cm.find("verify", "samples")) {
            const double n = parse_number(e->value, e->line);
            if (!(n >= 1.0) || n != std::floor(n))
                throw ConfigError("samples must be a positive integer", e->line);
            cfg.verify.samples = static_cast<int>(n);
        }
        if (const Entry* e = cm.find("verify", "seed")) {
            const double n = parse_number(e->value, e->line);
            if (!(n >= 0.0) || n != std::floor(n))
                throw ConfigError("seed must be a nonnegative integer", e->line);
            cfg.verify.seed = static_cast<unsigned long long>(n);
        }
        if (const Entry* e = cm.find("verify", "range")) {
            cfg.verify.range = parse_number(e->value, e->line);
            if (!(cfg.verify.range > 0.0))
                throw ConfigError("range must be positive", e->line);
        }
    }

    return cfg;
}

}  // namespace pmuobs
