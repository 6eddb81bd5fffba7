#include "sqznet/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <thread>

namespace sqznet {

namespace {

double get(const ComponentDecl& c, const std::string& key, double fallback) {
    auto it = c.params.find(key);
    return it == c.params.end() ? fallback : it->second;
}

// Netlist frequency keys are in Hz; physics runs in rad/s.
double get_angular(const ComponentDecl& c, const std::string& key, double fallback_hz) {
    return two_pi * get(c, key, fallback_hz);
}

OpaParams opa_params_of(const ComponentDecl& c) {
    OpaParams p;
    p.gamma_ic = get(c, "gamma_ic_rate", 0.0);
    p.gamma_oc = get(c, "gamma_oc_rate", 0.0);
    p.gamma_l = get(c, "gamma_l_rate", 0.0);
    p.nonlinearity = get(c, "nonlinearity_rate", 0.0);
    return p;
}

LaserNoiseParams noise_params_of(const ComponentDecl& c) {
    LaserNoiseParams p;
    p.relax_freq = get_angular(c, "relax_freq", 0.0);
    p.relax_height = get(c, "relax_height", 0.0);
    p.relax_width = get_angular(c, "relax_width", 0.0);
    p.lf_exponent = get(c, "lf_exponent", 0.0);
    p.lf_corner = get_angular(c, "lf_corner", 0.0);
    p.floor = get(c, "floor", 0.0);
    return p;
}

BeamSplitterParams bs_params_of(const ComponentDecl& c) {
    BeamSplitterParams p;
    p.ratio = get(c, "ratio", 0.5);
    p.phase = get(c, "phase", 0.0);
    p.visibility = get(c, "visibility", 1.0);
    return p;
}

HomodyneParams homodyne_params_of(const ComponentDecl& c) {
    HomodyneParams p;
    p.visibility = get(c, "visibility", 1.0);
    p.lo_suppression = get(c, "lo_suppression", 0.0);
    p.unmatched_visibility = get(c, "unmatched_visibility", 0.0);
    if (auto it = c.params.find("angle"); it != c.params.end())
        p.angle = it->second;
    return p;
}

// Rethrow parameter problems with the component name attached, preserving
// the error category (threshold errors must stay threshold errors).
template <typename F>
auto with_context(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const ThresholdError& e) {
        throw ThresholdError("component '" + name + "': " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError("component '" + name + "': " + e.what());
    }
}

struct Builder {
    const Network& net;
    BuiltNetwork out;
    // (to_comp, to_port) -> (from_comp, from_port)
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>> driver;
    std::set<std::string> noisy_vacuum; // vacuum components with a classical source

    explicit Builder(const Network& n) : net(n) {
        for (const auto& e : n.connections)
            driver[{e.to_comp, e.to_port}] = {e.from_comp, e.from_port};
    }

    FieldMode& port_field(const std::string& comp, const std::string& port) {
        return out.port_fields[comp + "." + port];
    }

    cplx carrier(const std::string& comp, const std::string& port) const {
        auto it = out.carriers.find(comp + "." + port);
        return it == out.carriers.end() ? cplx(0.0) : it->second;
    }

    void set_output(const std::string& comp, const std::string& port, FieldMode f, cplx amp) {
        out.port_fields[comp + "." + port] = std::move(f);
        out.carriers[comp + "." + port] = amp;
    }

    // Field arriving at an input port: the driver's output field, a fresh
    // tap for fan-out vacuum drivers, or auto-filled fresh vacuum.
    std::pair<FieldMode, cplx> input_field(const std::string& comp, const std::string& port) {
        auto it = driver.find({comp, port});
        if (it == driver.end()) {
            FieldMode f = FieldMode::single_const(
                out.sources.add_fresh_vacuum(comp + "." + port + ".vac").id, Mat2::identity());
            return {std::move(f), cplx(0.0)};
        }
        const auto& [from_comp, from_port] = it->second;
        const ComponentDecl* from = net.find(from_comp);
        if (from->kind == "vacuum") {
            // Every tap sees its own fresh vacuum plus the component's
            // shared classical source (if any): correlated classical noise,
            // independent quantum noise.
            FieldMode f = FieldMode::single_const(
                out.sources.add_fresh_vacuum(from_comp + ".vac").id, Mat2::identity());
            if (noisy_vacuum.count(from_comp))
                f.accumulate(from_comp + ".noise", 1.0,
                             [](double) { return Mat2::identity(); });
            return {std::move(f), cplx(0.0)};
        }
        return {port_field(from_comp, from_port), carrier(from_comp, from_port)};
    }

    void build_component(const ComponentDecl& c) {
        if (c.kind == "laser") {
            LaserNoiseParams p = noise_params_of(c);
            const double power = get(c, "power", 1e-3);
            if (power < 0.0)
                throw ConfigError("laser power must be >= 0");
            FieldMode f = laser_source(p, out.sources, c.name);
            set_output(c.name, "out", std::move(f), std::sqrt(power));
        } else if (c.kind == "vacuum") {
            LaserNoiseParams p = noise_params_of(c);
            p.validate();
            if (p.excess(1.0) > 0.0 || p.relax_height > 0.0 || p.floor > 0.0 ||
                (p.lf_exponent > 0.0 && p.lf_corner > 0.0)) {
                SpectrumFn excess = [p](double w) { return p.excess(w); };
                out.sources.add_classical(c.name + ".noise", excess, excess);
                noisy_vacuum.insert(c.name);
            }
            // Tap fields are created at the consuming ports.
        } else if (c.kind == "bs") {
            BeamSplitterParams p = bs_params_of(c);
            auto [in1, a1] = input_field(c.name, "a");
            auto [in2, a2] = input_field(c.name, "b");
            auto [o1, o2] = beam_splitter(in1, in2, p, out.sources, c.name);
            const double tr = std::sqrt(p.ratio), tt = std::sqrt(1.0 - p.ratio);
            const cplx ph = std::polar(1.0, p.phase);
            set_output(c.name, "o1", std::move(o1), tr * a1 + ph * tt * a2);
            set_output(c.name, "o2", std::move(o2), tt * a1 - ph * tr * a2);
        } else if (c.kind == "opa") {
            OpaParams p = opa_params_of(c);
            p.validate();
            auto [seed, amp] = input_field(c.name, "seed");
            FieldMode outf;
            if (driver.count({c.name, "loss"})) {
                FieldMode lossf = input_field(c.name, "loss").first;
                outf = opa_apply(seed, p, out.sources, c.name, &lossf);
            } else {
                outf = opa_apply(seed, p, out.sources, c.name, nullptr);
            }
            // Carrier gain at DC: amplitude factor 2 sqrt(g_ic g_oc)/(g - Y).
            const double gain =
                2.0 * std::sqrt(p.gamma_ic * p.gamma_oc) / (p.gamma() - p.nonlinearity);
            set_output(c.name, "out", std::move(outf), gain * amp);
        } else if (c.kind == "loss") {
            const double eta = get(c, "efficiency", 1.0);
            auto [in, amp] = input_field(c.name, "in");
            set_output(c.name, "out", loss_element(in, eta, out.sources, c.name),
                       std::sqrt(eta) * amp);
        } else if (c.kind == "phase") {
            const double theta = get(c, "angle", 0.0);
            auto [in, amp] = input_field(c.name, "in");
            set_output(c.name, "out", phase_shift(in, theta), std::polar(1.0, theta) * amp);
        } else if (c.kind == "mc") {
            const double pole = get_angular(c, "pole", 0.0);
            auto [in, amp] = input_field(c.name, "in");
            set_output(c.name, "out", mode_cleaner(in, pole, out.sources, c.name), amp);
        } else if (c.kind == "homodyne") {
            HomodyneParams p = homodyne_params_of(c);
            auto [in, amp] = input_field(c.name, "in");
            DetectorSetup d;
            d.params = p;
            d.carrier_in = amp;
            if (driver.count({c.name, "lo"}))
                d.lo = input_field(c.name, "lo").first;
            d.detected = homodyne_detected_field(in, p, out.sources, c.name);
            out.port_fields[c.name + ".in"] = std::move(in);
            out.carriers[c.name + ".in"] = amp;
            out.detectors.emplace(c.name, std::move(d));
        } else {
            throw ConfigError("unknown component kind '" + c.kind + "'");
        }
    }
};

} // namespace

BuiltNetwork build(const Network& net) {
    net.validate();
    Builder b(net);
    std::map<std::string, const ComponentDecl*> by_name;
    for (const auto& c : net.components)
        by_name[c.name] = &c;
    for (const auto& name : net.topo_order()) {
        const ComponentDecl* c = by_name[name];
        with_context(name, [&] { b.build_component(*c); });
    }
    // Keep only the detectors that were marked with `detect`.
    std::map<std::string, DetectorSetup> marked;
    for (const auto& d : net.detectors) {
        auto it = b.out.detectors.find(d);
        if (it == b.out.detectors.end())
            throw TopologyError("detector '" + d + "' is not a homodyne component");
        marked.emplace(d, std::move(it->second));
    }
    b.out.detectors = std::move(marked);
    return std::move(b.out);
}

std::map<std::string, SpectrumResult> evaluate(const BuiltNetwork& built,
                                               const FrequencyGrid& grid, unsigned threads) {
    struct Columns {
        const DetectorSetup* det;
        std::vector<double> vp, vm, vt;
        Quadrature qa;
    };
    std::vector<Columns> cols;
    cols.reserve(built.detectors.size());
    for (const auto& [name, det] : built.detectors) {
        Columns c;
        c.det = &det;
        c.vp.resize(grid.size());
        c.vm.resize(grid.size());
        if (det.params.angle) {
            c.vt.resize(grid.size());
            c.qa = Quadrature::angle(*det.params.angle);
        }
        cols.push_back(std::move(c));
    }

    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double w = grid.omega(i);
            for (auto& c : cols) {
                const DetectorSetup& d = *c.det;
                c.vp[i] = homodyne_variance_at(d.detected, d.lo, d.params.lo_suppression,
                                               built.sources, Quadrature::plus(), w);
                c.vm[i] = homodyne_variance_at(d.detected, d.lo, d.params.lo_suppression,
                                               built.sources, Quadrature::minus(), w);
                if (!c.vt.empty())
                    c.vt[i] = homodyne_variance_at(d.detected, d.lo, d.params.lo_suppression,
                                                   built.sources, c.qa, w);
            }
        }
    };

    unsigned n = threads ? threads : std::thread::hardware_concurrency();
    n = std::max(1u, std::min<unsigned>(n, static_cast<unsigned>(grid.size())));
    if (n == 1) {
        worker(0, grid.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (grid.size() + n - 1) / n;
        for (unsigned t = 0; t < n; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(grid.size(), lo + chunk);
            if (lo < hi)
                pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool)
            th.join();
    }

    std::map<std::string, SpectrumResult> results;
    std::size_t k = 0;
    for (const auto& [name, det] : built.detectors) {
        Columns& c = cols[k++];
        std::optional<std::vector<double>> vt;
        if (!c.vt.empty())
            vt = std::move(c.vt);
        results.emplace(name,
                        SpectrumResult(grid, std::move(c.vp), std::move(c.vm), std::move(vt)));
    }
    return results;
}

std::map<std::string, SpectrumResult> evaluate(const Network& net, const FrequencyGrid& grid,
                                               unsigned threads) {
    return evaluate(build(net), grid, threads);
}

// ---------------------------------------------------------------------------
// Closed form
// ---------------------------------------------------------------------------

ClosedFormOut closed_form_v_out(const OpaParams& p1, const OpaParams& p2, double v_in_plus,
                                double omega, double r_in) {
    if (!(r_in >= 0.0 && r_in <= 1.0))
        throw ConfigError("input splitter ratio must be in [0,1]");
    if (!(v_in_plus >= 0.0))
        throw ConfigError("input variance must be >= 0");
    const OpaTransfer t1 = opa_transfer(p1, omega);
    const OpaTransfer t2 = opa_transfer(p2, omega);
    const double sr = std::sqrt(r_in);
    const double st = std::sqrt(1.0 - r_in);
    const double s2 = std::sqrt(0.5);
    const double rest = 0.5 * (std::norm(t1.t_l.plus) + std::norm(t2.t_l.plus) +
                               std::norm(t1.t_oc.plus) + std::norm(t2.t_oc.plus));
    auto port = [&](double sign) {
        const cplx c_in = s2 * (t1.t_ic.plus * sr + sign * t2.t_ic.plus * st);
        const cplx c_open = s2 * (t1.t_ic.plus * st - sign * t2.t_ic.plus * sr);
        return std::norm(c_in) * v_in_plus + std::norm(c_open) + rest;
    };
    return {port(+1.0), port(-1.0)};
}

// ---------------------------------------------------------------------------
// Balancing
// ---------------------------------------------------------------------------

namespace {

// Follow a signal forward through single-input pass-through elements until
// it lands on something else; returns (component, input-port) reached.
std::pair<std::string, std::string> follow_forward(const Network& net, const std::string& comp,
                                                   const std::string& port) {
    std::string fc = comp, fp = port;
    for (int guard = 0; guard < 1000; ++guard) {
        const Connection* edge = nullptr;
        for (const auto& e : net.connections)
            if (e.from_comp == fc && e.from_port == fp) {
                edge = &e;
                break;
            }
        if (!edge)
            return {"", ""};
        const ComponentDecl* to = net.find(edge->to_comp);
        if (to->kind == "loss" || to->kind == "phase" || to->kind == "mc") {
            fc = to->name;
            fp = "out";
            continue;
        }
        return {edge->to_comp, edge->to_port};
    }
    throw TopologyError("pass-through chain too long");
}

// Follow an input backwards through pass-throughs to the driving component.
std::pair<std::string, std::string> follow_backward(const Network& net, const std::string& comp,
                                                    const std::string& port) {
    std::string tc = comp, tp = port;
    for (int guard = 0; guard < 1000; ++guard) {
        const Connection* edge = nullptr;
        for (const auto& e : net.connections)
            if (e.to_comp == tc && e.to_port == tp) {
                edge = &e;
                break;
            }
        if (!edge)
            return {"", ""};
        const ComponentDecl* from = net.find(edge->from_comp);
        if (from->kind == "loss" || from->kind == "phase" || from->kind == "mc") {
            tc = from->name;
            tp = "in";
            continue;
        }
        return {edge->from_comp, edge->from_port};
    }
    throw TopologyError("pass-through chain too long");
}

struct DualOpaTopology {
    std::string splitter;  // input splitter (bs)
    std::string combiner;  // output combiner (bs)
    std::string opa_o1;    // cavity fed from splitter.o1
    std::string opa_o2;    // cavity fed from splitter.o2
    std::string det_o1;    // detector downstream of combiner.o1
    std::string det_o2;    // detector downstream of combiner.o2
    std::string source_id; // classical source to null
};

DualOpaTopology find_dual_opa(const Network& net) {
    DualOpaTopology t;
    std::vector<const ComponentDecl*> opas, lasers;
    for (const auto& c : net.components) {
        if (c.kind == "opa")
            opas.push_back(&c);
        if (c.kind == "laser")
            lasers.push_back(&c);
    }
    if (opas.size() != 2)
        throw TopologyError("balancing requires exactly two cavities, found " +
                            std::to_string(opas.size()));
    if (lasers.size() != 1)
        throw TopologyError("balancing requires exactly one laser input");
    t.source_id = lasers[0]->name + ".noise";

    // Seeds must come from the two outputs of one splitter.
    std::map<std::string, std::string> port_to_opa; // splitter port -> opa
    std::string splitter;
    for (const auto* o : opas) {
        auto [src, port] = follow_backward(net, o->name, "seed");
        const ComponentDecl* s = src.empty() ? nullptr : net.find(src);
        if (!s || s->kind != "bs")
            throw TopologyError("cavity '" + o->name + "' is not seeded from a beam splitter");
        if (splitter.empty())
            splitter = src;
        else if (splitter != src)
            throw TopologyError("cavity seeds come from different splitters");
        port_to_opa[port] = o->name;
    }
    if (!port_to_opa.count("o1") || !port_to_opa.count("o2"))
        throw TopologyError("input splitter must feed both cavities");
    t.splitter = splitter;
    t.opa_o1 = port_to_opa["o1"];
    t.opa_o2 = port_to_opa["o2"];

    // Outputs must recombine on one splitter feeding two detectors.
    std::string combiner;
    for (const auto* o : opas) {
        auto [dst, port] = follow_forward(net, o->name, "out");
        const ComponentDecl* d = dst.empty() ? nullptr : net.find(dst);
        if (!d || d->kind != "bs")
            throw TopologyError("cavity '" + o->name + "' does not feed a combining splitter");
        if (combiner.empty())
            combiner = dst;
        else if (combiner != dst)
            throw TopologyError("cavity outputs recombine on different splitters");
    }
    t.combiner = combiner;
    auto [d1, p1] = follow_forward(net, combiner, "o1");
    auto [d2, p2] = follow_forward(net, combiner, "o2");
    const ComponentDecl* c1 = d1.empty() ? nullptr : net.find(d1);
    const ComponentDecl* c2 = d2.empty() ? nullptr : net.find(d2);
    if (!c1 || c1->kind != "homodyne" || p1 != "in" || !c2 || c2->kind != "homodyne" ||
        p2 != "in")
        throw TopologyError("both combiner outputs must reach homodyne signal ports");
    t.det_o1 = d1;
    t.det_o2 = d2;
    return t;
}

// Principal-mode coefficient power of `source` in the field reaching the
// detector's signal port (companions excluded: they do not interfere and
// cannot be nulled by the splitter ratio).
double principal_leakage(const BuiltNetwork& built, const std::string& detector,
                         const std::string& source_id, double omega) {
    auto it = built.port_fields.find(detector + ".in");
    if (it == built.port_fields.end())
        throw TopologyError("detector '" + detector + "' has no evaluated input field");
    FieldMode f = it->second;
    f.companions.clear();
    return f.projected_weight(source_id, Quadrature::plus(), omega);
}

} // namespace

BalanceReport balance_input_splitter(const Network& net, double omega_target) {
    if (!(omega_target >= 0.0) || !std::isfinite(omega_target))
        throw ConfigError("balance target frequency must be finite and >= 0");
    const DualOpaTopology topo = find_dual_opa(net);

    // The input splits exactly once, so the dark-port source coefficient is
    // A sqrt(R) + B sqrt(1-R); extract A (R=1) and B (R=0) from the built
    // network and minimize |row|^2 analytically with R = sin^2(phi).
    auto coeff_rows = [&](double ratio, const std::string& det) {
        Network n = net;
        n.set_param(topo.splitter + ".ratio", ratio);
        BuiltNetwork b = build(n);
        auto it = b.port_fields.find(det + ".in");
        FieldMode f = it->second;
        f.companions.clear();
        Mat2 m = f.coefficient(topo.source_id, omega_target);
        return std::array<cplx, 2>{m.a, m.b}; // amplitude-quadrature row
    };

    // Identify the dark port at the balanced reference R = 0.5.
    BalanceReport rep;
    {
        Network n = net;
        n.set_param(topo.splitter + ".ratio", 0.5);
        BuiltNetwork b = build(n);
        const double l1 = principal_leakage(b, topo.det_o1, topo.source_id, omega_target);
        const double l2 = principal_leakage(b, topo.det_o2, topo.source_id, omega_target);
        if (l1 < l2) {
            rep.dark_detector = topo.det_o1;
            rep.unbalanced_leakage = l1;
        } else if (l2 < l1) {
            rep.dark_detector = topo.det_o2;
            rep.unbalanced_leakage = l2;
        } else {
            const cplx a1 = b.carriers.count(topo.det_o1 + ".in")
                                ? b.carriers.at(topo.det_o1 + ".in")
                                : cplx(0.0);
            const cplx a2 = b.carriers.count(topo.det_o2 + ".in")
                                ? b.carriers.at(topo.det_o2 + ".in")
                                : cplx(0.0);
            rep.dark_detector = std::abs(a1) < std::abs(a2) ? topo.det_o1 : topo.det_o2;
            rep.unbalanced_leakage = l2;
        }
    }
    rep.source_id = topo.source_id;

    // Dark-port coefficient row is rowA*sqrt(R) + rowB*sqrt(1-R); with
    // R = sin^2(phi), phi in [0, pi/2], the row power is
    //   a sin^2 + b cos^2 + 2 cross sin cos,
    // which has exactly one interior critical point at tan(2 phi) =
    // 2 cross / (b - a); compare it against the endpoints.
    const auto rowA = coeff_rows(1.0, rep.dark_detector);
    const auto rowB = coeff_rows(0.0, rep.dark_detector);
    const double a = std::norm(rowA[0]) + std::norm(rowA[1]);
    const double bpow = std::norm(rowB[0]) + std::norm(rowB[1]);
    const double cross =
        (rowA[0] * std::conj(rowB[0]) + rowA[1] * std::conj(rowB[1])).real();
    auto objective = [&](double phi) {
        const double s = std::sin(phi), c = std::cos(phi);
        return a * s * s + bpow * c * c + 2.0 * cross * s * c;
    };
    double two_phi = std::atan2(2.0 * cross, bpow - a);
    if (two_phi < 0.0)
        two_phi += std::numbers::pi;
    const double phi_c = 0.5 * two_phi;
    double best_phi = phi_c;
    double best = objective(phi_c);
    if (bpow < best) {
        best = bpow;
        best_phi = 0.0;
    }
    if (a < best) {
        best_phi = std::numbers::pi / 2.0;
    }
    rep.r_star = std::sin(best_phi) * std::sin(best_phi);

    Network balanced = net;
    balanced.set_param(topo.splitter + ".ratio", rep.r_star);
    BuiltNetwork built_star = build(balanced);
    rep.residual_leakage =
        principal_leakage(built_star, rep.dark_detector, topo.source_id, omega_target);
    if (rep.residual_leakage <= 0.0 || rep.unbalanced_leakage <= 0.0) {
        rep.suppression_db = rep.unbalanced_leakage > 0.0 ? 300.0 : 0.0;
    } else {
        rep.suppression_db =
            std::min(300.0, 10.0 * std::log10(rep.unbalanced_leakage / rep.residual_leakage));
    }

    // Broadband behavior: leakage at R* vs 0.5 over a band well below the
    // cavity linewidth scale.
    {
        Network half = net;
        half.set_param(topo.splitter + ".ratio", 0.5);
        BuiltNetwork built_half = build(half);
        const OpaParams p1 = opa_params_of(*net.find(topo.opa_o1));
        const double w_top = p1.gamma() - p1.nonlinearity;
        FrequencyGrid band = FrequencyGrid::log_hz(w_top / two_pi * 1e-5, w_top / two_pi, 41);
        rep.broadband.reserve(band.size());
        for (std::size_t i = 0; i < band.size(); ++i) {
            BalancePoint pt;
            pt.freq_hz = band.hz(i);
            pt.leakage_balanced =
                principal_leakage(built_star, rep.dark_detector, topo.source_id, band.omega(i));
            pt.leakage_unbalanced =
                principal_leakage(built_half, rep.dark_detector, topo.source_id, band.omega(i));
            rep.broadband.push_back(pt);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Inseparability
// ---------------------------------------------------------------------------

std::vector<double> epr_metric(const FieldMode& f1, const FieldMode& f2,
                               const SourceRegistry& reg, const FrequencyGrid& grid) {
    const double s2 = std::sqrt(0.5);
    const FieldMode sum_p = FieldMode::linear_combine(s2, f1, s2, f2);
    const FieldMode dif_p = FieldMode::linear_combine(s2, f1, -s2, f2);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.omega(i);
        // s = +1: V+[ (1+2)/sqrt2 ] + V-[ (1-2)/sqrt2 ]
        const double i_plus = sum_p.variance(reg, Quadrature::plus(), w) +
                              dif_p.variance(reg, Quadrature::minus(), w);
        // s = -1: V+[ (1-2)/sqrt2 ] + V-[ (1+2)/sqrt2 ]
        const double i_minus = dif_p.variance(reg, Quadrature::plus(), w) +
                               sum_p.variance(reg, Quadrature::minus(), w);
        out[i] = i_plus <= i_minus ? i_plus : i_minus;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

ScenarioId scenario_from_string(const std::string& s) {
    if (s == "single_opa")
        return ScenarioId::SingleOpa;
    if (s == "dual_opa_mz")
        return ScenarioId::DualOpaMz;
    if (s == "ring_opa")
        return ScenarioId::RingOpa;
    throw ConfigError("unknown scenario '" + s + "' (expected single_opa, dual_opa_mz or "
                      "ring_opa)");
}

std::string scenario_name(ScenarioId id) {
    switch (id) {
    case ScenarioId::SingleOpa: return "single_opa";
    case ScenarioId::DualOpaMz: return "dual_opa_mz";
    case ScenarioId::RingOpa: return "ring_opa";
    }
    throw InternalError("unreachable scenario id");
}

std::string scenario_description(ScenarioId id) {
    switch (id) {
    case ScenarioId::SingleOpa:
        return "one below-threshold cavity squeezer with a laser seed and homodyne readout";
    case ScenarioId::DualOpaMz:
        return "two squeezers in a Mach-Zehnder: the seed splits, squeezed outputs recombine "
               "into an intense beam (HD1) and a squeezed vacuum (HD2)";
    case ScenarioId::RingOpa:
        return "ring squeezer: two directional cavity modes share intracavity noise; "
               "recombination cancels the common-mode noise on the dark port (HD2)";
    }
    throw InternalError("unreachable scenario id");
}

const std::vector<ScenarioId>& all_scenarios() {
    static const std::vector<ScenarioId> ids = {ScenarioId::SingleOpa, ScenarioId::DualOpaMz,
                                                ScenarioId::RingOpa};
    return ids;
}

namespace {

// Shared cavity defaults: total decay 2*pi*10 MHz split 15% input coupler,
// 80% output coupler, 5% internal loss; nonlinearity at half threshold with
// the amplitude quadrature squeezed.
constexpr double default_gamma = two_pi * 1.0e7;

std::map<std::string, double> default_opa_params() {
    return {{"gamma_ic_rate", 0.15 * default_gamma},
            {"gamma_oc_rate", 0.80 * default_gamma},
            {"gamma_l_rate", 0.05 * default_gamma},
            {"nonlinearity_rate", -0.5 * default_gamma}};
}

std::map<std::string, double> quiet_laser_params() {
    return {{"power", 1e-3},      {"relax_freq", 0.0}, {"relax_height", 0.0},
            {"relax_width", 0.0}, {"lf_exponent", 0.0}, {"lf_corner", 0.0},
            {"floor", 0.0}};
}

std::map<std::string, double> quiet_vacuum_params() {
    return {{"relax_freq", 0.0}, {"relax_height", 0.0}, {"relax_width", 0.0},
            {"lf_exponent", 0.0}, {"lf_corner", 0.0},   {"floor", 0.0}};
}

std::map<std::string, double> default_bs_params() {
    return {{"ratio", 0.5}, {"phase", 0.0}, {"visibility", 1.0}};
}

std::map<std::string, double> default_homodyne_params() {
    return {{"visibility", 1.0}, {"lo_suppression", 0.0}, {"unmatched_visibility", 0.0}};
}

} // namespace

Network scenario(ScenarioId id, const std::map<std::string, double>& overrides) {
    Network n;
    switch (id) {
    case ScenarioId::SingleOpa:
        n.components = {{"laser", "L", quiet_laser_params()},
                        {"opa", "OPA1", default_opa_params()},
                        {"homodyne", "HD1", default_homodyne_params()}};
        n.connections = {{"L", "out", "OPA1", "seed"}, {"OPA1", "out", "HD1", "in"}};
        n.detectors = {"HD1"};
        break;
    case ScenarioId::DualOpaMz:
        n.components = {{"laser", "L", quiet_laser_params()},
                        {"bs", "INS", default_bs_params()},
                        {"opa", "OPA1", default_opa_params()},
                        {"opa", "OPA2", default_opa_params()},
                        {"bs", "CMB", default_bs_params()},
                        {"homodyne", "HD1", default_homodyne_params()},
                        {"homodyne", "HD2", default_homodyne_params()}};
        n.connections = {{"L", "out", "INS", "a"},      {"INS", "o1", "OPA1", "seed"},
                         {"INS", "o2", "OPA2", "seed"}, {"OPA1", "out", "CMB", "a"},
                         {"OPA2", "out", "CMB", "b"},   {"CMB", "o1", "HD1", "in"},
                         {"CMB", "o2", "HD2", "in"}};
        n.detectors = {"HD1", "HD2"};
        break;
    case ScenarioId::RingOpa:
        n.components = {{"vacuum", "N", quiet_vacuum_params()},
                        {"opa", "DIR1", default_opa_params()},
                        {"opa", "DIR2", default_opa_params()},
                        {"bs", "CMB", default_bs_params()},
                        {"homodyne", "HD1", default_homodyne_params()},
                        {"homodyne", "HD2", default_homodyne_params()}};
        n.connections = {{"N", "out", "DIR1", "loss"}, {"N", "out", "DIR2", "loss"},
                         {"DIR1", "out", "CMB", "a"},  {"DIR2", "out", "CMB", "b"},
                         {"CMB", "o1", "HD1", "in"},   {"CMB", "o2", "HD2", "in"}};
        n.detectors = {"HD1", "HD2"};
        break;
    }
    for (const auto& [path, value] : overrides)
        n.set_param(path, value);
    n.validate();
    return n;
}

std::vector<std::map<std::string, SpectrumResult>> sweep_parameter(
    const Network& net, const std::string& path, const std::vector<double>& values,
    const FrequencyGrid& grid, unsigned threads) {
    // Validate the path up front so an empty sweep still reports bad paths.
    {
        Network probe = net;
        auto dot = path.find('.');
        if (dot == std::string::npos)
            throw ConfigError("parameter path must be 'component.key', got '" + path + "'");
        const ComponentDecl* c = probe.find(path.substr(0, dot));
        if (!c)
            throw ConfigError("unknown component in parameter path '" + path + "'");
        if (!is_valid_key(c->kind, path.substr(dot + 1)))
            throw ConfigError("'" + path.substr(dot + 1) + "' is not a parameter of kind '" +
                              c->kind + "'");
    }
    std::vector<std::map<std::string, SpectrumResult>> out;
    out.reserve(values.size());
    for (double v : values) {
        Network n = net;
        n.set_param(path, v);
        out.push_back(evaluate(n, grid, threads));
    }
    return out;
}

} // namespace sqznet
