#pragma once

#include <stdexcept>
#include <string>

namespace pmuobs {

struct InvalidParams : std::runtime_error {
    explicit InvalidParams(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentState : std::runtime_error {
    explicit InconsistentState(const std::string& what) : std::runtime_error(what) {}
};

// Y1 fell below the positivity gate; divisions by Y1 are unsafe past this point.
struct ObservabilityLoss : std::runtime_error {
    double t;
    explicit ObservabilityLoss(double t_, const std::string& what)
        : std::runtime_error(what), t(t_) {}
};

struct IntegrationDiverged : std::runtime_error {
    double t;
    explicit IntegrationDiverged(double t_, const std::string& what)
        : std::runtime_error(what), t(t_) {}
};

struct ReconstructionDomain : std::runtime_error {
    explicit ReconstructionDomain(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    int line;  // 0 when not tied to a specific line
    explicit ConfigError(const std::string& what, int line_ = 0)
        : std::runtime_error(what), line(line_) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pmuobs
