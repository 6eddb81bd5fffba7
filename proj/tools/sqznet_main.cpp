#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sqznet/csv_report.hpp"
#include "sqznet/engine.hpp"
#include "sqznet/netlist.hpp"

namespace {

using namespace sqznet;

constexpr int exit_ok = 0;
constexpr int exit_config = 1;  // parse / elaboration / configuration problems
constexpr int exit_io = 2;      // file system problems
constexpr int exit_physics = 3; // threshold violations

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DiagnosticFailure : std::runtime_error {
    DiagnosticFailure() : std::runtime_error("netlist errors") {}
};

struct CommonOpts {
    std::string scenario;
    std::string input;
    double fmin_hz = 220e3;
    double fmax_hz = 2.1e6;
    std::size_t points = 400;
    bool lin = false;
    bool grid_set = false; // any explicit grid flag
    std::string output = "spectrum.csv";
    std::vector<std::string> sets;
    std::string leakage = "one-minus-v";
    unsigned threads = 0;
};

void add_network_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario,
                    "built-in scenario id (see the 'scenarios' command)");
    cmd->add_option("--input", o.input, "netlist file to simulate");
    cmd->add_option("--set", o.sets,
                    "override a component parameter, e.g. --set OPA1.nonlinearity_rate=-3e7 "
                    "(repeatable; netlist units)")
        ->take_all();
    cmd->add_option("--leakage-convention", o.leakage,
                    "combiner leakage convention for the suppression estimate")
        ->check(CLI::IsMember({"one-minus-v", "one-minus-v2"}));
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware parallelism)");
}

void add_grid_flags(CLI::App* cmd, CommonOpts& o) {
    auto* fmin = cmd->add_option("--fmin", o.fmin_hz, "lowest sideband frequency (Hz)");
    auto* fmax = cmd->add_option("--fmax", o.fmax_hz, "highest sideband frequency (Hz)");
    auto* pts = cmd->add_option("--points", o.points, "number of grid points");
    auto* lin = cmd->add_flag("--lin", o.lin, "linear frequency spacing");
    auto* log = cmd->add_flag_callback("--log", [&o] { o.lin = false; },
                                       "logarithmic frequency spacing (default)");
    cmd->parse_complete_callback([&o, fmin, fmax, pts, lin, log] {
        o.grid_set = fmin->count() || fmax->count() || pts->count() || lin->count() ||
                     log->count();
    });
}

std::map<std::string, double> parse_sets(const std::vector<std::string>& sets) {
    std::map<std::string, double> out;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size())
            throw ConfigError("--set expects component.key=value, got '" + s + "'");
        const std::string key = s.substr(0, eq);
        const std::string val = s.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(val, &used);
            if (used != val.size())
                throw std::invalid_argument(val);
            out[key] = v;
        } catch (const std::exception&) {
            throw ConfigError("--set value for '" + key + "' is not a number: '" + val + "'");
        }
    }
    return out;
}

Network load_network(const CommonOpts& o) {
    if (!o.scenario.empty() && !o.input.empty())
        throw ConfigError("--scenario and --input are mutually exclusive");
    if (o.scenario.empty() && o.input.empty())
        throw ConfigError("one of --scenario or --input is required");

    const auto overrides = parse_sets(o.sets);
    if (!o.scenario.empty())
        return scenario(scenario_from_string(o.scenario), overrides);

    std::ifstream f(o.input, std::ios::binary);
    if (!f)
        throw IoError("cannot read input file '" + o.input + "'");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad())
        throw IoError("failed while reading '" + o.input + "'");

    ElaborateResult r = load_netlist(buf.str());
    for (const auto& d : r.diagnostics)
        std::cerr << o.input << ":" << d.format() << "\n";
    if (!r.ok())
        throw DiagnosticFailure();
    Network net = *r.network;
    for (const auto& [path, value] : overrides)
        net.set_param(path, value);
    return net;
}

FrequencyGrid make_grid(const CommonOpts& o, const Network& net) {
    double fmin = o.fmin_hz, fmax = o.fmax_hz;
    std::size_t points = o.points;
    bool log = !o.lin;
    if (!o.grid_set && net.sweep) {
        fmin = net.sweep->fmin_hz;
        fmax = net.sweep->fmax_hz;
        points = net.sweep->points;
        log = net.sweep->log;
    }
    if (!(fmin > 0.0))
        throw ConfigError("--fmin must be > 0");
    if (!(fmin < fmax))
        throw ConfigError("--fmin must be smaller than --fmax");
    if (points < 2)
        throw ConfigError("--points must be at least 2");
    return log ? FrequencyGrid::log_hz(fmin, fmax, points)
               : FrequencyGrid::linear_hz(fmin, fmax, points);
}

std::string output_path_for(const std::string& base, const std::string& detector,
                            bool single_detector) {
    if (single_detector)
        return base;
    const std::filesystem::path p(base);
    std::filesystem::path out = p.parent_path() / p.stem();
    return out.string() + "_" + detector + p.extension().string();
}

void write_csv_file(const std::string& path, const SpectrumResult& result) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open output file '" + path + "'");
    write_csv(f, result);
    f.flush();
    if (!f)
        throw IoError("failed while writing '" + path + "'");
}

LeakageConvention convention_of(const CommonOpts& o) {
    return o.leakage == "one-minus-v2" ? LeakageConvention::OneMinusV2
                                       : LeakageConvention::OneMinusV;
}

// When a detector with unmatched-light sensitivity sits behind an imperfect
// combiner, report the expected optical suppression of input noise on that
// port.
void print_suppression_estimates(const Network& net, LeakageConvention conv) {
    for (const auto& det : net.detectors) {
        const ComponentDecl* hd = net.find(det);
        if (!hd)
            continue;
        auto it = hd->params.find("unmatched_visibility");
        if (it == hd->params.end() || it->second <= 0.0)
            continue;
        // Walk back to the combiner through pass-through elements.
        std::string comp = det, port = "in";
        const ComponentDecl* combiner = nullptr;
        for (int guard = 0; guard < 1000 && !combiner; ++guard) {
            const Connection* edge = nullptr;
            for (const auto& e : net.connections)
                if (e.to_comp == comp && e.to_port == port) {
                    edge = &e;
                    break;
                }
            if (!edge)
                break;
            const ComponentDecl* from = net.find(edge->from_comp);
            if (from->kind == "bs") {
                combiner = from;
            } else if (from->kind == "loss" || from->kind == "phase" || from->kind == "mc") {
                comp = from->name;
                port = "in";
            } else {
                break;
            }
        }
        if (!combiner)
            continue;
        auto vis_it = combiner->params.find("visibility");
        const double vis = vis_it == combiner->params.end() ? 1.0 : vis_it->second;
        if (vis >= 1.0)
            continue;
        const double matched =
            hd->params.count("visibility") ? hd->params.at("visibility") : 1.0;
        const double db = suppression_estimate_db(vis, matched, it->second, conv);
        std::cout << det << ": optical suppression estimate "
                  << format_double_9(db) << " dB (combiner " << combiner->name
                  << ", convention "
                  << (conv == LeakageConvention::OneMinusV ? "one-minus-v" : "one-minus-v2")
                  << ")\n";
    }
}

int cmd_run(const CommonOpts& o) {
    Network net = load_network(o);
    const FrequencyGrid grid = make_grid(o, net);
    const auto results = evaluate(net, grid, o.threads);
    if (results.empty())
        throw ConfigError("network has no detectors");
    const bool single = results.size() == 1;
    for (const auto& [det, res] : results) {
        const std::string path = output_path_for(o.output, det, single);
        write_csv_file(path, res);
        std::cout << summarize(det, res) << "\n";
        std::cout << det << ": wrote " << path << "\n";
    }
    print_suppression_estimates(net, convention_of(o));
    return exit_ok;
}

int cmd_balance(const CommonOpts& o, double target_freq_hz) {
    Network net = load_network(o);
    const BalanceReport rep = balance_input_splitter(net, two_pi * target_freq_hz);
    char rbuf[32];
    std::snprintf(rbuf, sizeof(rbuf), "%.6g", rep.r_star);
    std::cout << "optimal input splitter ratio R* = " << rbuf << "\n";
    std::cout << "dark port: " << rep.dark_detector << " (nulling source " << rep.source_id
              << ")\n";
    std::cout << "leakage power at target: " << format_double_9(rep.residual_leakage)
              << " (R = 0.5: " << format_double_9(rep.unbalanced_leakage) << ")\n";
    std::cout << "suppression vs R = 0.5: " << format_double_9(rep.suppression_db)
              << " dB" << (rep.suppression_db >= 300.0 ? " (cap)" : "") << "\n";
    double f_hold = 0.0;
    for (const auto& pt : rep.broadband) {
        if (pt.leakage_balanced <= 1e-4 * pt.leakage_unbalanced)
            f_hold = pt.freq_hz;
        else
            break;
    }
    if (f_hold > 0.0)
        std::cout << "leakage stays >= 40 dB below the R = 0.5 case up to "
                  << format_double_9(f_hold) << " Hz\n";
    return exit_ok;
}

int cmd_scenarios() {
    for (const auto id : all_scenarios())
        std::cout << scenario_name(id) << "  -  " << scenario_description(id) << "\n";
    return exit_ok;
}

int cmd_sweep(const CommonOpts& o, const std::string& param, const std::vector<double>& values) {
    Network net = load_network(o);
    const FrequencyGrid grid = make_grid(o, net);
    const auto runs = sweep_parameter(net, param, values, grid, o.threads);
    const std::filesystem::path base(o.output);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const bool single = runs[i].size() == 1;
        for (const auto& [det, res] : runs[i]) {
            std::filesystem::path stem = base.parent_path() / base.stem();
            const std::string path = output_path_for(
                stem.string() + "_" + std::to_string(i) + base.extension().string(), det,
                single);
            write_csv_file(path, res);
            std::cout << param << " = " << format_double(values[i]) << "  " << summarize(det, res)
                      << "\n";
            std::cout << det << ": wrote " << path << "\n";
        }
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sqznet: frequency-domain quadrature noise spectra of linearized "
                 "quantum-optical networks"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    auto* run = app.add_subcommand("run", "evaluate a network and write CSV spectra");
    add_network_flags(run, run_opts);
    add_grid_flags(run, run_opts);
    run->add_option("--output", run_opts.output, "output CSV path (default spectrum.csv)");

    CommonOpts bal_opts;
    double target_freq = 0.0;
    auto* bal = app.add_subcommand("balance",
                                   "optimize the input splitter ratio of a two-cavity network");
    add_network_flags(bal, bal_opts);
    bal->add_option("--target-freq", target_freq, "sideband frequency to null (Hz, default 0)");

    auto* sc = app.add_subcommand("scenarios", "list built-in scenarios");

    CommonOpts sweep_opts;
    std::string sweep_param;
    std::vector<double> sweep_values;
    auto* sw = app.add_subcommand("sweep", "re-evaluate while sweeping one parameter");
    add_network_flags(sw, sweep_opts);
    add_grid_flags(sw, sweep_opts);
    sw->add_option("--output", sweep_opts.output, "output CSV base path");
    sw->add_option("--param", sweep_param, "dotted parameter path, e.g. INS.ratio")->required();
    sw->add_option("--values", sweep_values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (run->parsed())
            return cmd_run(run_opts);
        if (bal->parsed())
            return cmd_balance(bal_opts, target_freq);
        if (sc->parsed())
            return cmd_scenarios();
        if (sw->parsed())
            return cmd_sweep(sweep_opts, sweep_param, sweep_values);
        return exit_config;
    } catch (const DiagnosticFailure&) {
        return exit_config;
    } catch (const ThresholdError& e) {
        std::cerr << "physics error: " << e.what() << "\n";
        return exit_physics;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return exit_io;
    } catch (const TopologyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
}
