// Batch front end: run one scenario, sweep estimator gains, run randomized
// certificate suites, or compare previously written reports.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "pmuobs/config.hpp"
#include "pmuobs/csv.hpp"
#include "pmuobs/errors.hpp"
#include "pmuobs/report.hpp"
#include "pmuobs/scenario.hpp"
#include "pmuobs/verify.hpp"

namespace fs = std::filesystem;
using namespace pmuobs;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IoError("cannot read " + path);
    return os.str();
}

std::string file_stem(const std::string& path) {
    return fs::path(path).stem().string();
}

// Numbers embedded in file names: 12.5 -> "12p5", -3 -> "m3", 1e+06 -> "1e06".
std::string value_tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s(buf);
    std::string out;
    for (char c : s) {
        if (c == '.') out += 'p';
        else if (c == '-') out += 'm';
        else if (c == '+') continue;
        else out += c;
    }
    return out;
}

RunConfig load_config(const std::string& path) {
    return parse_config(read_file(path), file_stem(path));
}

std::string output_dir(const RunConfig& cfg) {
    if (const char* env = std::getenv("PMUOBS_OUT"); env != nullptr && *env != '\0')
        return env;
    return cfg.output.dir;
}

std::vector<std::string> selected_columns(const RunConfig& cfg, const Scenario& s) {
    if (cfg.output.columns_all) return all_column_names();
    if (!cfg.output.columns.empty()) return cfg.output.columns;
    return default_columns(s);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path);
    out << text;
    if (!out) throw IoError("cannot write " + path);
}

// Runs one scenario and writes `<dir>/<label>.csv` and
// `<dir>/<label>.report.json`; returns the report.
RunReport run_and_emit(const Scenario& s, const RunConfig& cfg, const std::string& label) {
    const Trajectory traj = run_scenario(s);
    const RunReport rep = build_report(traj, label);
    const fs::path dir(output_dir(cfg));
    fs::create_directories(dir);
    emit_csv(traj, selected_columns(cfg, s), (dir / (label + ".csv")).string());
    write_text((dir / (label + ".report.json")).string(), report_to_json(rep));
    for (const std::string& w : traj.warnings) std::cerr << "warning: " << w << "\n";
    return rep;
}

int cmd_run(const std::string& config_path, bool check) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.scenario_present)
        throw ConfigError("config has no scenario; nothing to run");
    const std::string label = cfg.output.prefix.empty() ? cfg.name : cfg.output.prefix;
    const RunReport rep = run_and_emit(cfg.scenario, cfg, label);
    std::cout << compare_report({rep});
    if (check) {
        for (const CheckResult& c : rep.checks) {
            std::cout << (c.passed ? "pass" : "FAIL") << "  " << c.name
                      << "  worst " << c.worst << "  tol " << c.tolerance << "\n";
        }
        if (!rep.all_checks_passed()) {
            std::cerr << "structural checks failed\n";
            return 1;
        }
    }
    return 0;
}

struct SweepEntry {
    std::string label;
    Scenario scenario;
};

int cmd_sweep(const std::string& config_path) {
    const RunConfig cfg = load_config(config_path);
    if (!cfg.scenario_present)
        throw ConfigError("config has no scenario; nothing to sweep");
    if (!cfg.sweep.any())
        throw ConfigError("config has no [sweep] lists; nothing to sweep");
    const std::string base = cfg.output.prefix.empty() ? cfg.name : cfg.output.prefix;

    std::vector<SweepEntry> entries;
    for (double g : cfg.sweep.gamma) {
        Scenario s = cfg.scenario;
        s.gamma1 = g;
        s.gamma2 = g;
        entries.push_back({base + "_gamma_" + value_tag(g), s});
    }
    for (double g : cfg.sweep.overparam_gain) {
        Scenario s = cfg.scenario;
        s.overparam_gain = g;
        entries.push_back({base + "_op_" + value_tag(g), s});
    }
    for (double g : cfg.sweep.gradient_gain) {
        Scenario s = cfg.scenario;
        s.gradient_gain = g;
        entries.push_back({base + "_grad_" + value_tag(g), s});
    }

    // Entries run concurrently in batches; reports are assembled in entry
    // order after the join so output stays deterministic.
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    std::vector<RunReport> reports(entries.size());
    for (std::size_t at = 0; at < entries.size(); at += width) {
        const std::size_t end = std::min(entries.size(), at + width);
        std::vector<std::future<RunReport>> batch;
        for (std::size_t i = at; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, [&cfg, &entries, i] {
                return run_and_emit(entries[i].scenario, cfg, entries[i].label);
            }));
        }
        for (std::size_t i = at; i < end; ++i) reports[i] = batch[i - at].get();
    }

    std::cout << compare_report(reports);
    return 0;
}

int cmd_verify(const std::string& what, int samples, unsigned long long seed,
               double range, bool have_samples, bool have_seed, bool have_range) {
    VerifySpec spec;
    if (what == "lemma1" || what == "drem") {
        spec.present = true;
        spec.suite = what;
    } else {
        const RunConfig cfg = load_config(what);
        if (!cfg.verify.present)
            throw ConfigError("config has no [verify] section");
        spec = cfg.verify;
    }
    if (have_samples) spec.samples = samples;
    if (have_seed) spec.seed = seed;
    if (have_range) spec.range = range;

    VerifyResult res;
    if (spec.suite == "lemma1") {
        res = verify_lemma1(spec.samples > 0 ? spec.samples : 10000, spec.seed,
                            spec.range > 0.0 ? spec.range : 10.0);
    } else {
        res = verify_drem(spec.samples > 0 ? spec.samples : 1000, spec.seed,
                          spec.range > 0.0 ? spec.range : 1.0);
    }
    std::cout << verify_summary(res);
    return res.passed() ? 0 : 1;
}

int cmd_report(const std::string& dir) {
    std::vector<std::string> paths;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const std::string name = e.path().filename().string();
        const std::string tail = ".report.json";
        if (name.size() > tail.size()
            && name.compare(name.size() - tail.size(), tail.size(), tail) == 0)
            paths.push_back(e.path().string());
    }
    if (paths.empty()) throw IoError("no .report.json files in " + dir);
    std::sort(paths.begin(), paths.end());
    std::vector<RunReport> reports;
    for (const std::string& p : paths) reports.push_back(report_from_json(read_file(p)));
    std::cout << compare_report(reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synchronous-machine observer experiments"};
    app.require_subcommand(1);

    std::string run_config;
    bool run_check = false;
    CLI::App* run = app.add_subcommand("run", "run one scenario and emit CSV + report");
    run->add_option("config", run_config, "scenario config file")->required();
    run->add_flag("--check", run_check, "fail unless every structural check passes");

    std::string sweep_config;
    CLI::App* sweep = app.add_subcommand("sweep", "run every sweep entry and compare");
    sweep->add_option("config", sweep_config, "scenario config file with [sweep]")->required();

    std::string verify_what;
    int verify_samples = 0;
    unsigned long long verify_seed = 12345;
    double verify_range = 0.0;
    CLI::App* verify = app.add_subcommand("verify", "run a randomized certificate suite");
    verify->add_option("suite", verify_what, "suite name (lemma1 | drem) or config file")
        ->required();
    CLI::Option* opt_samples = verify->add_option("--samples", verify_samples, "sample count");
    CLI::Option* opt_seed = verify->add_option("--seed", verify_seed, "generator seed");
    CLI::Option* opt_range = verify->add_option("--range", verify_range, "draw half-width");

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "compare reports in a directory");
    report->add_option("dir", report_dir, "directory holding .report.json files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config, run_check);
        if (sweep->parsed()) return cmd_sweep(sweep_config);
        if (verify->parsed())
            return cmd_verify(verify_what, verify_samples, verify_seed, verify_range,
                              opt_samples->count() > 0, opt_seed->count() > 0,
                              opt_range->count() > 0);
        if (report->parsed()) return cmd_report(report_dir);
    } catch (const ConfigError& e) {
        if (e.line > 0)
            std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        else
            std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
