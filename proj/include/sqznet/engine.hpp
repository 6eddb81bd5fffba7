#pragma once

#include <map>
#include <string>
#include <vector>

#include "sqznet/components.hpp"
#include "sqznet/field_mode.hpp"
#include "sqznet/frequency_grid.hpp"
#include "sqznet/network.hpp"
#include "sqznet/noise_source.hpp"
#include "sqznet/spectrum_result.hpp"

namespace sqznet {

// One detector after field propagation: the effective detected field
// (principal + companions + fill vacuum), the local-oscillator field, and
// the measurement parameters.
struct DetectorSetup {
    FieldMode detected;
    FieldMode lo;
    HomodyneParams params;
    cplx carrier_in; // carrier amplitude arriving at the signal port (sqrt(W))
};

// Fields and sources of a network after one propagation pass. Coefficients
// are lazy in frequency; building is frequency-independent.
struct BuiltNetwork {
    SourceRegistry sources;
    std::map<std::string, DetectorSetup> detectors;    // detector name -> setup
    std::map<std::string, FieldMode> port_fields;      // "comp.port" -> field
    std::map<std::string, cplx> carriers;              // "comp.port" -> amplitude
};

// Propagate fields from sources to detectors in topological order.
// Throws ConfigError/TopologyError/ThresholdError on invalid networks.
BuiltNetwork build(const Network& net);

// Evaluate every detector over the grid. Deterministic (bit-identical for
// identical inputs) independent of `threads`; threads = 0 uses the hardware
// concurrency.
std::map<std::string, SpectrumResult> evaluate(const Network& net, const FrequencyGrid& grid,
                                               unsigned threads = 0);
std::map<std::string, SpectrumResult> evaluate(const BuiltNetwork& built, const FrequencyGrid& grid,
                                               unsigned threads = 0);

// ---------------------------------------------------------------------------
// Closed-form reference for the two-cavity interferometer
// ---------------------------------------------------------------------------

// Amplitude-quadrature output variances of the interferometer
//   in -> splitter(r_in) -> cavity 1 / cavity 2 -> 50/50 combiner
// computed analytically (no field propagation):
//   out1 (sum port), out2 (difference port).
// v_in_plus is the input's amplitude variance at this frequency; the unused
// splitter port is vacuum. Phase-quadrature values follow by negating both
// nonlinearities.
struct ClosedFormOut {
    double v1;
    double v2;
};
ClosedFormOut closed_form_v_out(const OpaParams& p1, const OpaParams& p2, double v_in_plus,
                                double omega, double r_in = 0.5);

// ---------------------------------------------------------------------------
// Input-splitter balancing
// ---------------------------------------------------------------------------

struct BalancePoint {
    double freq_hz;
    double leakage_balanced;   // source-coefficient power at R*
    double leakage_unbalanced; // same at R = 0.5
};

struct BalanceReport {
    double r_star = 0.5;
    double residual_leakage = 0.0;   // coefficient power at omega_target, R*
    double unbalanced_leakage = 0.0; // coefficient power at omega_target, R = 0.5
    double suppression_db = 0.0;     // 10 log10(unbalanced/residual), capped at 300
    std::string source_id;           // the nulled classical source
    std::string dark_detector;       // detector on the difference port
    std::vector<BalancePoint> broadband; // suppression across a frequency band
};

// Find the input-splitter ratio R* that minimizes the input-source
// coefficient power in the dark-port output at omega_target (0 allowed).
// Requires the two-cavity interferometer topology: one input splitter
// feeding two cavities whose outputs recombine on one splitter, with a
// detector on each combiner output. Throws TopologyError otherwise.
BalanceReport balance_input_splitter(const Network& net, double omega_target);

// ---------------------------------------------------------------------------
// Two-mode inseparability
// ---------------------------------------------------------------------------

// I(w) = min over s in {+1,-1} of
//          V[(X+_1 + s X+_2)/sqrt(2)] + V[(X-_1 - s X-_2)/sqrt(2)].
// Values below 2 certify entanglement of the two fields under the sum
// criterion. Ties choose s = +1.
std::vector<double> epr_metric(const FieldMode& f1, const FieldMode& f2,
                               const SourceRegistry& reg, const FrequencyGrid& grid);

// ---------------------------------------------------------------------------
// Scenarios and sweeps
// ---------------------------------------------------------------------------

enum class ScenarioId { SingleOpa, DualOpaMz, RingOpa };

ScenarioId scenario_from_string(const std::string& s);
std::string scenario_name(ScenarioId id);
std::string scenario_description(ScenarioId id);
const std::vector<ScenarioId>& all_scenarios();

// Build a fully wired network with documented defaults; overrides are
// dotted "component.key" paths in netlist units. Throws ConfigError on
// unknown keys.
Network scenario(ScenarioId id, const std::map<std::string, double>& overrides = {});

// One evaluation per value of the dotted parameter; order preserved.
std::vector<std::map<std::string, SpectrumResult>> sweep_parameter(
    const Network& net, const std::string& path, const std::vector<double>& values,
    const FrequencyGrid& grid, unsigned threads = 0);

} // namespace sqznet
