#pragma once

// Random valid tree-shaped networks for property tests: sources feed chains
// of passive elements and cavities, every dangling output ends in a detector.

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sqznet/network.hpp"

namespace testutil {

struct RandomNetOptions {
    bool classical = false; // put classical noise on lasers
    bool visibility = true; // allow imperfect mode overlap
    bool cavities = true;   // allow pumped cavities
    bool sweeps = false;    // sometimes attach a sweep declaration
};

inline sqznet::Network random_network(std::mt19937& gen, const RandomNetOptions& opt = {}) {
    using namespace sqznet;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto uin = [&](double lo, double hi) { return lo + (hi - lo) * u01(gen); };

    Network net;
    int next_id = 0;
    auto fresh = [&](const char* base) { return std::string(base) + std::to_string(++next_id); };
    std::vector<std::pair<std::string, std::string>> open;

    const int n_sources = 1 + static_cast<int>(u01(gen) * 2.999);
    for (int i = 0; i < n_sources; ++i) {
        if (u01(gen) < 0.5) {
            ComponentDecl laser{"laser", fresh("L"), {}};
            laser.params["power"] = uin(1e-4, 1e-2);
            if (opt.classical && u01(gen) < 0.7) {
                laser.params["floor"] = uin(0.0, 100.0);
                if (u01(gen) < 0.5) {
                    laser.params["relax_freq"] = uin(3e5, 2e6);
                    laser.params["relax_height"] = uin(1.0, 1e4);
                    laser.params["relax_width"] = uin(1e4, 2e5);
                }
            }
            net.components.push_back(laser);
            open.emplace_back(laser.name, "out");
        } else {
            net.components.push_back({"vacuum", fresh("N"), {}});
            open.emplace_back(net.components.back().name, "out");
        }
    }

    const int n_elements = static_cast<int>(u01(gen) * 7.0);
    for (int i = 0; i < n_elements && !open.empty(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
        const double which = u01(gen);
        if (which < 0.25 && open.size() >= 2) {
            ComponentDecl bs{"bs", fresh("BS"), {}};
            bs.params["ratio"] = u01(gen);
            if (u01(gen) < 0.4)
                bs.params["phase"] = uin(-3.0, 3.0);
            if (opt.visibility && u01(gen) < 0.3)
                bs.params["visibility"] = uin(0.8, 1.0);
            net.components.push_back(bs);
            std::size_t a = pick(gen), b = pick(gen);
            while (b == a)
                b = pick(gen);
            if (a > b)
                std::swap(a, b);
            net.connections.push_back({open[a].first, open[a].second, bs.name, "a"});
            net.connections.push_back({open[b].first, open[b].second, bs.name, "b"});
            open.erase(open.begin() + static_cast<long>(b));
            open.erase(open.begin() + static_cast<long>(a));
            open.emplace_back(bs.name, "o1");
            open.emplace_back(bs.name, "o2");
        } else if (which < 0.45 && opt.cavities) {
            ComponentDecl opa{"opa", fresh("OPA"), {}};
            const double scale = uin(1e7, 1e8);
            opa.params["gamma_ic_rate"] = uin(0.05, 0.4) * scale;
            opa.params["gamma_oc_rate"] = uin(0.3, 0.9) * scale;
            opa.params["gamma_l_rate"] = uin(0.01, 0.2) * scale;
            const double g = opa.params["gamma_ic_rate"] + opa.params["gamma_oc_rate"] +
                             opa.params["gamma_l_rate"];
            opa.params["nonlinearity_rate"] = uin(-0.9, 0.9) * g;
            net.components.push_back(opa);
            const std::size_t a = pick(gen);
            net.connections.push_back({open[a].first, open[a].second, opa.name, "seed"});
            open[a] = {opa.name, "out"};
            if (open.size() >= 2 && u01(gen) < 0.2) {
                std::size_t b = pick(gen);
                while (b == a)
                    b = pick(gen);
                net.connections.push_back({open[b].first, open[b].second, opa.name, "loss"});
                open.erase(open.begin() + static_cast<long>(b));
            }
        } else if (which < 0.65) {
            ComponentDecl loss{"loss", fresh("ATT"), {}};
            loss.params["efficiency"] = u01(gen);
            net.components.push_back(loss);
            const std::size_t a = pick(gen);
            net.connections.push_back({open[a].first, open[a].second, loss.name, "in"});
            open[a] = {loss.name, "out"};
        } else if (which < 0.82) {
            ComponentDecl ph{"phase", fresh("PH"), {}};
            ph.params["angle"] = uin(-3.0, 3.0);
            net.components.push_back(ph);
            const std::size_t a = pick(gen);
            net.connections.push_back({open[a].first, open[a].second, ph.name, "in"});
            open[a] = {ph.name, "out"};
        } else {
            ComponentDecl mc{"mc", fresh("MC"), {}};
            mc.params["pole"] = uin(1e4, 1e7);
            net.components.push_back(mc);
            const std::size_t a = pick(gen);
            net.connections.push_back({open[a].first, open[a].second, mc.name, "in"});
            open[a] = {mc.name, "out"};
        }
    }

    for (const auto& [comp, port] : open) {
        ComponentDecl hd{"homodyne", fresh("HD"), {}};
        if (opt.visibility && u01(gen) < 0.3)
            hd.params["visibility"] = uin(0.9, 1.0);
        if (u01(gen) < 0.3)
            hd.params["angle"] = uin(-3.0, 3.0);
        net.components.push_back(hd);
        net.connections.push_back({comp, port, hd.name, "in"});
        net.detectors.push_back(hd.name);
    }

    if (opt.sweeps && u01(gen) < 0.5) {
        sqznet::SweepDecl s;
        s.fmin_hz = uin(1e3, 1e5);
        s.fmax_hz = s.fmin_hz * uin(5.0, 100.0);
        s.log = u01(gen) < 0.5;
        s.points = 8 + static_cast<std::size_t>(u01(gen) * 56.0);
        net.sweep = s;
    }
    return net;
}

} // namespace testutil
