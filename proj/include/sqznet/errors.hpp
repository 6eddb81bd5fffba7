#pragma once

#include <stdexcept>
#include <string>

namespace sqznet {

// Parameter or configuration outside its valid range.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// |nonlinearity| >= total decay rate: parametric oscillation threshold.
struct ThresholdError : std::domain_error {
    using std::domain_error::domain_error;
};

// Network graph problems: cycles, dangling detectors, bad ports.
struct TopologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A coefficient table references a noise source that is not registered.
struct UnknownSourceError : std::runtime_error {
    explicit UnknownSourceError(const std::string& source_id)
        : std::runtime_error("unknown noise source id '" + source_id + "'"), id(source_id) {}
    std::string id;
};

// Impossible internal state (e.g. negative variance from valid spectra).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace sqznet
