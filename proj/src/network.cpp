#include "sqznet/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace sqznet {

namespace {

const std::map<std::string, KindInfo>& kind_table() {
    static const std::map<std::string, KindInfo> table = {
        {"laser",
         {{},
          {"out"},
          {"power", "relax_freq", "relax_height", "relax_width", "lf_exponent", "lf_corner",
           "floor"},
          {"relax_freq", "relax_width", "lf_corner"},
          false}},
        {"vacuum",
         {{},
          {"out"},
          {"relax_freq", "relax_height", "relax_width", "lf_exponent", "lf_corner", "floor"},
          {"relax_freq", "relax_width", "lf_corner"},
          true}},
        {"bs", {{"a", "b"}, {"o1", "o2"}, {"ratio", "phase", "visibility"}, {}, false}},
        {"opa",
         {{"seed", "loss"},
          {"out"},
          {"gamma_ic_rate", "gamma_oc_rate", "gamma_l_rate", "nonlinearity_rate"},
          {},
          false}},
        {"loss", {{"in"}, {"out"}, {"efficiency"}, {}, false}},
        {"phase", {{"in"}, {"out"}, {"angle"}, {}, false}},
        {"mc", {{"in"}, {"out"}, {"pole"}, {"pole"}, false}},
        {"homodyne",
         {{"in", "lo"},
          {},
          {"visibility", "angle", "lo_suppression", "unmatched_visibility"},
          {},
          false}},
    };
    return table;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

const KindInfo& kind_info(const std::string& kind) {
    auto it = kind_table().find(kind);
    if (it == kind_table().end())
        throw ConfigError("unknown component kind '" + kind + "'");
    return it->second;
}

bool is_known_kind(const std::string& kind) { return kind_table().count(kind) != 0; }

const std::vector<std::string>& known_kinds() {
    static const std::vector<std::string> kinds = [] {
        std::vector<std::string> v;
        for (const auto& [k, info] : kind_table())
            v.push_back(k);
        return v;
    }();
    return kinds;
}

bool is_valid_key(const std::string& kind, const std::string& key) {
    return is_known_kind(kind) && contains(kind_info(kind).keys, key);
}

bool is_freq_key(const std::string& kind, const std::string& key) {
    return is_known_kind(kind) && contains(kind_info(kind).freq_keys, key);
}

const ComponentDecl* Network::find(const std::string& name) const {
    for (const auto& c : components)
        if (c.name == name)
            return &c;
    return nullptr;
}

ComponentDecl* Network::find(const std::string& name) {
    for (auto& c : components)
        if (c.name == name)
            return &c;
    return nullptr;
}

void Network::set_param(const std::string& path, double value) {
    const auto dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 >= path.size())
        throw ConfigError("parameter path must be 'component.key', got '" + path + "'");
    const std::string comp = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);
    ComponentDecl* c = find(comp);
    if (!c)
        throw ConfigError("unknown component '" + comp + "' in parameter path '" + path + "'");
    if (!is_valid_key(c->kind, key))
        throw ConfigError("'" + key + "' is not a parameter of kind '" + c->kind + "'");
    if (!std::isfinite(value))
        throw ConfigError("parameter '" + path + "' must be finite");
    c->params[key] = value;
}

void Network::validate() const {
    std::set<std::string> names;
    for (const auto& c : components) {
        if (c.name.empty())
            throw ConfigError("component name must be nonempty");
        if (!names.insert(c.name).second)
            throw ConfigError("duplicate component name '" + c.name + "'");
        const KindInfo& info = kind_info(c.kind);
        (void)info;
        for (const auto& [key, value] : c.params) {
            if (!is_valid_key(c.kind, key))
                throw ConfigError("component '" + c.name + "': '" + key +
                                  "' is not a parameter of kind '" + c.kind + "'");
            if (!std::isfinite(value))
                throw ConfigError("component '" + c.name + "': parameter '" + key +
                                  "' must be finite");
        }
    }

    std::set<std::pair<std::string, std::string>> driven_inputs;
    std::set<std::pair<std::string, std::string>> used_outputs;
    for (const auto& e : connections) {
        const ComponentDecl* from = find(e.from_comp);
        const ComponentDecl* to = find(e.to_comp);
        if (!from)
            throw TopologyError("connection references unknown component '" + e.from_comp + "'");
        if (!to)
            throw TopologyError("connection references unknown component '" + e.to_comp + "'");
        const KindInfo& fi = kind_info(from->kind);
        const KindInfo& ti = kind_info(to->kind);
        if (!contains(fi.outputs, e.from_port))
            throw TopologyError("'" + e.from_comp + "." + e.from_port + "' is not an output port "
                                "of kind '" + from->kind + "'");
        if (!contains(ti.inputs, e.to_port))
            throw TopologyError("'" + e.to_comp + "." + e.to_port + "' is not an input port of "
                                "kind '" + to->kind + "'");
        if (!driven_inputs.insert({e.to_comp, e.to_port}).second)
            throw TopologyError("input port '" + e.to_comp + "." + e.to_port +
                                "' has more than one driver");
        if (!used_outputs.insert({e.from_comp, e.from_port}).second && !fi.fan_out)
            throw TopologyError("output port '" + e.from_comp + "." + e.from_port +
                                "' drives more than one input (only vacuum outputs may fan out)");
    }

    for (const auto& d : detectors) {
        const ComponentDecl* c = find(d);
        if (!c)
            throw TopologyError("detector references unknown component '" + d + "'");
        if (c->kind != "homodyne")
            throw TopologyError("detector '" + d + "' is not a homodyne component");
    }

    if (sweep) {
        if (sweep->points < 2)
            throw ConfigError("sweep must have at least 2 points");
        if (!(sweep->fmin_hz > 0.0) || !(sweep->fmin_hz < sweep->fmax_hz))
            throw ConfigError("sweep requires 0 < fmin < fmax");
    }

    topo_order(); // throws on cycles
}

std::vector<std::string> Network::topo_order() const {
    std::map<std::string, std::set<std::string>> succ;
    std::map<std::string, int> indeg;
    for (const auto& c : components)
        indeg[c.name] = 0;
    for (const auto& e : connections) {
        if (!indeg.count(e.from_comp) || !indeg.count(e.to_comp))
            throw TopologyError("connection references unknown component");
        if (succ[e.from_comp].insert(e.to_comp).second)
            ++indeg[e.to_comp];
    }
    std::set<std::string> ready;
    for (const auto& [name, d] : indeg)
        if (d == 0)
            ready.insert(name);
    std::vector<std::string> order;
    while (!ready.empty()) {
        const std::string n = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(n);
        for (const auto& m : succ[n])
            if (--indeg[m] == 0)
                ready.insert(m);
    }
    if (order.size() != components.size())
        throw TopologyError("network graph contains a cycle");
    return order;
}

bool network_equal(const Network& a, const Network& b) {
    auto comp_key = [](const ComponentDecl& c) { return c.name; };
    std::vector<ComponentDecl> ca = a.components, cb = b.components;
    std::sort(ca.begin(), ca.end(),
              [&](const auto& x, const auto& y) { return comp_key(x) < comp_key(y); });
    std::sort(cb.begin(), cb.end(),
              [&](const auto& x, const auto& y) { return comp_key(x) < comp_key(y); });
    if (ca.size() != cb.size())
        return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (ca[i].name != cb[i].name || ca[i].kind != cb[i].kind || ca[i].params != cb[i].params)
            return false;

    auto edge_key = [](const Connection& e) {
        return e.from_comp + "." + e.from_port + "->" + e.to_comp + "." + e.to_port;
    };
    std::set<std::string> ea, eb;
    for (const auto& e : a.connections)
        ea.insert(edge_key(e));
    for (const auto& e : b.connections)
        eb.insert(edge_key(e));
    if (ea != eb)
        return false;

    if (std::set<std::string>(a.detectors.begin(), a.detectors.end()) !=
        std::set<std::string>(b.detectors.begin(), b.detectors.end()))
        return false;

    if (a.sweep.has_value() != b.sweep.has_value())
        return false;
    if (a.sweep && (a.sweep->fmin_hz != b.sweep->fmin_hz || a.sweep->fmax_hz != b.sweep->fmax_hz ||
                    a.sweep->log != b.sweep->log || a.sweep->points != b.sweep->points))
        return false;
    return true;
}

} // namespace sqznet
