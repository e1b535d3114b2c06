#pragma once

#include <string>
#include <vector>

#include "pmuobs/scenario.hpp"

namespace pmuobs {

struct OutputOptions {
    std::string dir = "out";
    std::string prefix;                 // defaults to the config name
    bool columns_all = false;
    std::vector<std::string> columns;   // empty + !columns_all => default set
};

struct SweepSpec {
    std::vector<double> gamma;           // DREM estimator gains, gamma1 = gamma2
    std::vector<double> overparam_gain;  // Gamma = g I5
    std::vector<double> gradient_gain;   // Gamma2 = g I2
    bool any() const {
        return !gamma.empty() || !overparam_gain.empty() || !gradient_gain.empty();
    }
};

struct VerifySpec {
    bool present = false;
    std::string suite;  // "lemma1" | "drem"
    int samples = 0;    // 0 => suite default
    unsigned long long seed = 12345;
    double range = 0.0; // 0 => suite default
};

struct RunConfig {
    std::string name = "run";
    bool scenario_present = false;
    Scenario scenario;
    OutputOptions output;
    SweepSpec sweep;
    VerifySpec verify;
};

// Parses the flat sectioned key-value grammar documented in the README.
// Fail-closed: unknown sections or keys, duplicate keys, malformed values,
// and missing required scenario keys all throw ConfigError with a line
// number where one applies. `name` seeds the default output prefix.
RunConfig parse_config(const std::string& text, const std::string& name = "run");

}  // namespace pmuobs
