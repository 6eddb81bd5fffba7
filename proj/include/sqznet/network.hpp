#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sqznet/errors.hpp"

namespace sqznet {

// Declarative description of a network: component instances with numeric
// parameters, directed connections between named ports, detector marks and
// an optional frequency-sweep declaration. This is what the netlist parser
// produces and what scenarios construct; the engine turns it into fields.
//
// Parameter values are stored in netlist units: keys listed as frequency
// keys for the kind are ordinary frequencies in Hz (converted to rad/s by
// the engine), keys with the "_rate" suffix are angular rates in rad/s,
// everything else is dimensionless.

struct ComponentDecl {
    std::string kind;
    std::string name;
    std::map<std::string, double> params;
};

struct Connection {
    std::string from_comp, from_port;
    std::string to_comp, to_port;
};

struct SweepDecl {
    double fmin_hz = 0.0;
    double fmax_hz = 0.0;
    bool log = true;
    std::size_t points = 0;
};

struct Network {
    std::vector<ComponentDecl> components;
    std::vector<Connection> connections;
    std::vector<std::string> detectors;
    std::optional<SweepDecl> sweep;

    const ComponentDecl* find(const std::string& name) const;
    ComponentDecl* find(const std::string& name);

    // Set component parameter via dotted path "component.key". Throws
    // ConfigError on unknown component or a key invalid for its kind.
    void set_param(const std::string& path, double value);

    // Structural validation: kinds known, names unique, keys valid, ports
    // valid, input ports single-driven, outputs single-driven except
    // vacuum.out (fan-out allowed), graph acyclic, detectors reference
    // homodyne components. Throws ConfigError/TopologyError.
    void validate() const;

    // Component names in dependency (topological) order.
    std::vector<std::string> topo_order() const;
};

// Structural equality: same components (name, kind, exact parameter maps),
// same connection set, same detector set, same sweep. Order-insensitive.
bool network_equal(const Network& a, const Network& b);

// ---------------------------------------------------------------------------
// Kind metadata (single authority used by parser, serializer and engine)
// ---------------------------------------------------------------------------

struct KindInfo {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::string> keys;      // canonical order for serialization
    std::vector<std::string> freq_keys; // subset of keys taking Hz-family units
    bool fan_out = false;               // outputs may drive several inputs
};

// Metadata for a component kind; throws ConfigError on unknown kind.
const KindInfo& kind_info(const std::string& kind);
bool is_known_kind(const std::string& kind);
const std::vector<std::string>& known_kinds();

bool is_valid_key(const std::string& kind, const std::string& key);
bool is_freq_key(const std::string& kind, const std::string& key);

} // namespace sqznet
