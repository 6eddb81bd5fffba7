// Acceptance suite: ten self-contained checks, one PASS/FAIL line each.
// Exits nonzero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "random_networks.hpp"
#include "sqznet/engine.hpp"
#include "sqznet/netlist.hpp"

using namespace sqznet;

namespace {

int g_failures = 0;
std::ostringstream g_detail;

void require(bool cond, const std::string& what) {
    if (!cond)
        throw std::runtime_error(what);
}

template <typename Fn>
void criterion(int n, const std::string& title, Fn&& body) {
    try {
        g_detail.str("");
        body();
        std::printf("PASS: %2d. %s\n", n, title.c_str());
    } catch (const std::exception& e) {
        ++g_failures;
        std::printf("FAIL: %2d. %s -- %s\n", n, title.c_str(), e.what());
    }
    const std::string extra = g_detail.str();
    if (!extra.empty())
        std::printf("      %s\n", extra.c_str());
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

constexpr double g0 = two_pi * 1e7;

// --------------------------------------------------------------------------

void check_shot_noise_identity() {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const FrequencyGrid grid = FrequencyGrid::log_hz(1e3, 1e7, 400);

    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // Random lossless network of splitters and phase shifters fed by
        // quiet lasers and vacua.
        Network net;
        int id = 0;
        auto fresh = [&](const char* b) { return std::string(b) + std::to_string(++id); };
        std::vector<std::pair<std::string, std::string>> open;
        const int n_src = 2 + trial % 3;
        for (int s = 0; s < n_src; ++s) {
            if (u01(gen) < 0.5) {
                net.components.push_back(
                    {"laser", fresh("L"), {{"power", 1e-4 + u01(gen) * 1e-2}}});
            } else {
                net.components.push_back({"vacuum", fresh("N"), {}});
            }
            open.emplace_back(net.components.back().name, "out");
        }
        for (int e = 0; e < 4; ++e) {
            std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
            if (u01(gen) < 0.5 && open.size() >= 2) {
                ComponentDecl bs{"bs", fresh("BS"), {{"ratio", u01(gen)}}};
                if (u01(gen) < 0.5)
                    bs.params["phase"] = (u01(gen) * 2.0 - 1.0) * 3.0;
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
            } else {
                ComponentDecl ph{"phase", fresh("PH"),
                                 {{"angle", (u01(gen) * 2.0 - 1.0) * 3.0}}};
                net.components.push_back(ph);
                const std::size_t a = pick(gen);
                net.connections.push_back({open[a].first, open[a].second, ph.name, "in"});
                open[a] = {ph.name, "out"};
            }
        }
        for (const auto& [c, p] : open) {
            ComponentDecl hd{"homodyne", fresh("HD"), {}};
            net.components.push_back(hd);
            net.connections.push_back({c, p, hd.name, "in"});
            net.detectors.push_back(hd.name);
        }

        for (const auto& [det, res] : evaluate(net, grid)) {
            for (std::size_t i = 0; i < grid.size(); ++i) {
                require(std::abs(res.v_plus[i] - 1.0) <= 1e-12,
                        det + ": |V+ - 1| > 1e-12 at point " + std::to_string(i));
                require(std::abs(res.v_minus[i] - 1.0) <= 1e-12,
                        det + ": |V- - 1| > 1e-12 at point " + std::to_string(i));
            }
        }
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    require(secs < 1.0, "runtime " + std::to_string(secs) + " s exceeds 1 s");
}

void check_closed_form_equivalence() {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const FrequencyGrid grid = FrequencyGrid::log_hz(1e4, 3e7, 400);

    std::mt19937 gen(22);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int draw = 0; draw < 100; ++draw) {
        OpaParams p[2];
        std::map<std::string, double> ov;
        for (int k = 0; k < 2; ++k) {
            const double scale = (0.5 + u01(gen)) * g0;
            p[k].gamma_ic = (0.05 + 0.35 * u01(gen)) * scale;
            p[k].gamma_oc = (0.30 + 0.60 * u01(gen)) * scale;
            p[k].gamma_l = (0.01 + 0.19 * u01(gen)) * scale;
            p[k].nonlinearity = (u01(gen) * 1.8 - 0.9) * p[k].gamma();
            const std::string c = k == 0 ? "OPA1." : "OPA2.";
            ov[c + "gamma_ic_rate"] = p[k].gamma_ic;
            ov[c + "gamma_oc_rate"] = p[k].gamma_oc;
            ov[c + "gamma_l_rate"] = p[k].gamma_l;
            ov[c + "nonlinearity_rate"] = p[k].nonlinearity;
        }
        const double r_in = u01(gen);
        const double floor = u01(gen) * 100.0;
        ov["INS.ratio"] = r_in;
        ov["L.floor"] = floor;

        const auto results = evaluate(scenario(ScenarioId::DualOpaMz, ov), grid);
        OpaParams m[2] = {p[0], p[1]};
        m[0].nonlinearity = -m[0].nonlinearity;
        m[1].nonlinearity = -m[1].nonlinearity;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double w = grid.omega(i);
            const ClosedFormOut vp = closed_form_v_out(p[0], p[1], 1.0 + floor, w, r_in);
            const ClosedFormOut vm = closed_form_v_out(m[0], m[1], 1.0 + floor, w, r_in);
            require(rel_diff(results.at("HD1").v_plus[i], vp.v1) <= 1e-10,
                    "HD1 V+ deviates at draw " + std::to_string(draw));
            require(rel_diff(results.at("HD2").v_plus[i], vp.v2) <= 1e-10,
                    "HD2 V+ deviates at draw " + std::to_string(draw));
            require(rel_diff(results.at("HD1").v_minus[i], vm.v1) <= 1e-10,
                    "HD1 V- deviates at draw " + std::to_string(draw));
            require(rel_diff(results.at("HD2").v_minus[i], vm.v2) <= 1e-10,
                    "HD2 V- deviates at draw " + std::to_string(draw));
        }
    }
    const double secs = std::chrono::duration<double>(clock::now() - start).count();
    require(secs < 10.0, "runtime " + std::to_string(secs) + " s exceeds 10 s");
}

void check_threshold_limit() {
    std::map<std::string, double> ov;
    ov["OPA1.gamma_ic_rate"] = 0.0;
    ov["OPA1.gamma_l_rate"] = 0.0;
    ov["OPA1.nonlinearity_rate"] = -0.999 * 0.8 * g0; // gamma = gamma_oc
    const Network net = scenario(ScenarioId::SingleOpa, ov);
    const FrequencyGrid grid = FrequencyGrid::log_hz(1.0, 100.0, 16);
    const SpectrumResult res = evaluate(net, grid).at("HD1");
    const double vp = res.v_plus.front();
    const double vm = res.v_minus.front();
    require(std::abs(vp - 2.5025e-7) <= 1e-11,
            "V+ = " + std::to_string(vp) + " misses 2.5025e-7 +/- 1e-11");
    require(std::abs(vp * vm - 1.0) <= 1e-6,
            "V+ V- = " + std::to_string(vp * vm) + " misses 1 +/- 1e-6");
}

void check_uncertainty_product() {
    const FrequencyGrid grid = FrequencyGrid::log_hz(1e4, 1e7, 5);
    std::mt19937 gen(33);
    testutil::RandomNetOptions opt;
    opt.classical = false;
    double worst = 1e300;
    for (int i = 0; i < 1000; ++i) {
        const Network net = testutil::random_network(gen, opt);
        for (const auto& [det, res] : evaluate(net, grid)) {
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double prod = res.v_plus[k] * res.v_minus[k];
                worst = std::min(worst, prod);
                require(prod >= 1.0 - 1e-9,
                        det + ": V+V- = " + std::to_string(prod) + " at network " +
                            std::to_string(i));
            }
        }
    }
    g_detail << "minimum V+V- over all draws: " << worst;
}

void check_classical_noise_immunity() {
    const FrequencyGrid grid = FrequencyGrid::log_hz(220e3, 2.1e6, 400);
    const SpectrumResult quiet = evaluate(scenario(ScenarioId::DualOpaMz), grid).at("HD2");
    const SpectrumResult noisy =
        evaluate(scenario(ScenarioId::DualOpaMz, {{"L.floor", 1e6}}), grid).at("HD2");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(rel_diff(noisy.v_plus[i], quiet.v_plus[i]) <= 1e-9,
                "V+ differs at point " + std::to_string(i));
        require(rel_diff(noisy.v_minus[i], quiet.v_minus[i]) <= 1e-9,
                "V- differs at point " + std::to_string(i));
    }
}

void check_balancing() {
    const Network net =
        scenario(ScenarioId::DualOpaMz, {{"OPA2.nonlinearity_rate", -0.45 * g0}});
    const BalanceReport rep = balance_input_splitter(net, 0.0);
    require(std::abs(rep.r_star - 0.51694) <= 1e-5,
            "R* = " + std::to_string(rep.r_star) + " misses 0.51694 +/- 1e-5");
    require(rep.suppression_db >= 120.0,
            "leakage reduction " + std::to_string(rep.suppression_db) + " dB < 120 dB");
    g_detail << "R* = " << rep.r_star << ", reduction " << rep.suppression_db << " dB";
}

void check_suppression_figure() {
    const double primary =
        suppression_estimate_db(0.986, 0.96, 0.28, LeakageConvention::OneMinusV);
    const double alternate =
        suppression_estimate_db(0.986, 0.96, 0.28, LeakageConvention::OneMinusV2);
    require(std::abs(primary - 29.2) <= 1.0,
            "default-convention estimate " + std::to_string(primary) + " outside 29.2 +/- 1.0");
    require(std::abs(alternate - 26.3) <= 1.0,
            "alternate-convention estimate " + std::to_string(alternate) +
                " outside 26.3 +/- 1.0");
    g_detail << "one-minus-v: " << primary << " dB, one-minus-v2: " << alternate << " dB";
}

void check_ring_cancellation() {
    const FrequencyGrid grid = FrequencyGrid::log_hz(220e3, 2.1e6, 400);
    const SpectrumResult quiet = evaluate(scenario(ScenarioId::RingOpa), grid).at("HD2");
    const SpectrumResult noisy =
        evaluate(scenario(ScenarioId::RingOpa, {{"N.floor", 1e4}}), grid).at("HD2");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        require(rel_diff(noisy.v_plus[i], quiet.v_plus[i]) <= 1e-9,
                "V+ excess at point " + std::to_string(i));
        require(rel_diff(noisy.v_minus[i], quiet.v_minus[i]) <= 1e-9,
                "V- excess at point " + std::to_string(i));
    }
}

void check_demonstration_spectra() {
    std::map<std::string, double> ov;
    ov["L.relax_freq"] = 750e3; // Hz
    ov["L.relax_height"] = 1e5;
    ov["L.relax_width"] = 50e3;
    ov["CMB.visibility"] = 0.986;
    ov["HD1.visibility"] = 0.96;
    ov["HD2.visibility"] = 0.96;
    ov["HD2.unmatched_visibility"] = 0.28;
    const FrequencyGrid grid = FrequencyGrid::log_hz(220e3, 2.1e6, 400);
    const auto results = evaluate(scenario(ScenarioId::DualOpaMz, ov), grid);
    const SpectrumResult& vac = results.at("HD2");
    const SpectrumResult& intense = results.at("HD1");

    require(vac.v_plus.front() < 1.0, "vacuum port is not squeezed at 220 kHz (V+ = " +
                                          std::to_string(vac.v_plus.front()) + ")");
    bool noisy_band = false;
    bool intense_above = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid.hz(i);
        if (f >= 640e3 && f <= 870e3 && vac.v_plus[i] > 1.0)
            noisy_band = true;
        if (f < 1.9e6 && intense.v_plus[i] > 1.0)
            intense_above = true;
    }
    require(noisy_band, "vacuum port never exceeds shot noise in 640-870 kHz");
    require(intense_above, "intense port never exceeds shot noise below 1.9 MHz");
    g_detail << "vacuum port at 220 kHz: " << vac.v_plus.front();
}

void check_parser_robustness() {
    for (const ScenarioId id : all_scenarios()) {
        const Network net = scenario(id);
        const std::string text = serialize(net);
        const ElaborateResult e = load_netlist(text);
        require(e.ok(), scenario_name(id) + " failed to re-parse");
        require(network_equal(net, *e.network), scenario_name(id) + " round-trip mismatch");
        require(serialize(*e.network) == text, scenario_name(id) + " serialize not idempotent");
    }

    const std::string seed = serialize(scenario(ScenarioId::DualOpaMz));
    std::mt19937 gen(44);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(seed.size()) - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> printable(32, 126);
    std::uniform_int_distribution<int> len(0, 160);

    for (int i = 0; i < 100000; ++i) {
        std::string s;
        if (i % 2 == 0) {
            s = seed;
            const int edits = 1 + (i % 8);
            for (int e = 0; e < edits; ++e)
                s[static_cast<std::size_t>(pos(gen))] = static_cast<char>(byte(gen));
        } else {
            s.resize(static_cast<std::size_t>(len(gen)));
            for (auto& ch : s)
                ch = static_cast<char>(i % 4 == 1 ? byte(gen) : printable(gen));
        }
        const ParseResult r = parse(s); // must never throw or hang
        const std::size_t lines =
            1 + static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
        for (const auto& d : r.diagnostics) {
            require(d.line >= 1 && d.line <= lines + 1,
                    "diagnostic line out of bounds on fuzz input " + std::to_string(i));
            require(d.column >= 1, "diagnostic column out of bounds on fuzz input " +
                                       std::to_string(i));
        }
    }
}

} // namespace

int main() {
    criterion(1, "passive lossless networks sit exactly at shot noise", check_shot_noise_identity);
    criterion(2, "network engine matches the closed-form two-cavity spectra",
              check_closed_form_equivalence);
    criterion(3, "near-threshold lossless cavity reaches the squeezing limit",
              check_threshold_limit);
    criterion(4, "random quantum networks never violate the uncertainty product",
              check_uncertainty_product);
    criterion(5, "+60 dB laser noise leaves the vacuum port unchanged",
              check_classical_noise_immunity);
    criterion(6, "splitter balancing nulls asymmetric-cavity leakage", check_balancing);
    criterion(7, "dark-port suppression budget matches the quoted figures",
              check_suppression_figure);
    criterion(8, "ring resonator noise is common mode and cancels", check_ring_cancellation);
    criterion(9, "demonstration spectra show squeezing, noise peak, and intense-port noise",
              check_demonstration_spectra);
    criterion(10, "parser round-trips scenarios and survives fuzzing",
              check_parser_robustness);

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
