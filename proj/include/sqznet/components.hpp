#pragma once

#include <optional>
#include <string>
#include <utility>

#include "sqznet/field_mode.hpp"
#include "sqznet/frequency_grid.hpp"
#include "sqznet/mat2.hpp"
#include "sqznet/noise_source.hpp"
#include "sqznet/spectrum_result.hpp"

namespace sqznet {

// ---------------------------------------------------------------------------
// Parameter types
// ---------------------------------------------------------------------------

// Cavity decay rates (rad/s) and real parametric nonlinearity (rad/s);
// the sign of `nonlinearity` selects which quadrature is deamplified
// (negative: amplitude quadrature squeezed).
struct OpaParams {
    double gamma_ic = 0.0;
    double gamma_oc = 0.0;
    double gamma_l = 0.0;
    double nonlinearity = 0.0;

    double gamma() const { return gamma_ic + gamma_oc + gamma_l; }
    void validate() const;
};

struct BeamSplitterParams {
    double ratio = 0.5;      // power reflectivity R in [0,1]
    double phase = 0.0;      // relative phase theta_bs (rad)
    double visibility = 1.0; // mode-overlap amplitude in [0,1]; 1 = perfect

    void validate() const;
};

// Classical intensity/phase noise of a laser, in shot-noise units:
//   V(w) = 1 + floor + relax_height * Gr^2 wr^2 / ((w^2-wr^2)^2 + Gr^2 w^2)
//            + (lf_corner/w)^lf_exponent      (term present when both > 0)
// All rates in rad/s.
struct LaserNoiseParams {
    double relax_freq = 0.0;   // wr
    double relax_height = 0.0; // peak excess at resonance, shot-noise units
    double relax_width = 0.0;  // Gr
    double lf_exponent = 0.0;  // k
    double lf_corner = 0.0;    // wc
    double floor = 0.0;        // white classical excess

    void validate() const;
    // Classical excess V(w) - 1 (>= 0 for valid params).
    double excess(double omega) const;
};

struct HomodyneParams {
    double visibility = 1.0;            // fringe visibility with the matched mode
    std::optional<double> angle;        // measured quadrature angle (rad); unset: principal only
    double lo_suppression = 0.0;        // residual power coupling of LO classical noise
    double unmatched_visibility = 0.0;  // fringe visibility with unmatched companion light

    void validate() const;
};

// Convention for the leakage power fraction at an imperfect combiner used
// by the suppression estimate: OneMinusV uses (1 - V), OneMinusV2 uses
// (1 - V^2).
enum class LeakageConvention { OneMinusV, OneMinusV2 };

// ---------------------------------------------------------------------------
// Component transfer functions
// ---------------------------------------------------------------------------

// Below-threshold cavity transfer coefficients at sideband frequency omega.
// `plus` acts on the amplitude quadrature, `minus` on the phase quadrature
// (nonlinearity sign flipped).
struct QuadPair {
    cplx plus;
    cplx minus;

    Mat2 diag() const { return Mat2::diagonal(plus, minus); }
};

struct OpaTransfer {
    QuadPair t_ic; // seed (input-coupler) transmission
    QuadPair t_l;  // intracavity-loss port coupling
    QuadPair t_oc; // output-coupler reflection/response
};

// Transfer coefficients of the cavity:
//   t_ic = 2 sqrt(g_oc g_ic) / (iw - Y + g)
//   t_l  = 2 sqrt(g_oc g_l)  / (iw - Y + g)
//   t_oc = 2 g_oc / (iw - Y + g) - 1
// with g the total decay rate and Y the nonlinearity; the `minus`
// coefficients use -Y. Throws ThresholdError when |Y| >= g.
OpaTransfer opa_transfer(const OpaParams& p, double omega);

// Field leaving the output coupler: seed through t_ic, plus fresh vacuum
// through the loss port (unless a loss-port field is supplied) and the
// output-coupler port. Registers fresh vacua under "<name>.l"/"<name>.oc".
// Companion (unmatched) light on the seed does not enter the cavity mode
// and is not propagated.
FieldMode opa_apply(const FieldMode& seed, const OpaParams& p, SourceRegistry& reg,
                    const std::string& name, const FieldMode* loss_port_input = nullptr);

// out1 = sqrt(R) in1 + e^{i phase} sqrt(1-R) in2
// out2 = sqrt(1-R) in1 - e^{i phase} sqrt(R) in2
// With visibility < 1, only amplitude fraction V of each input interferes
// (topped up with fresh vacuum); the orthogonal remainders are attached to
// the outputs as non-interfering companion modes carrying the inputs'
// sources through a loss channel of efficiency split*(1-V^2).
std::pair<FieldMode, FieldMode> beam_splitter(const FieldMode& in1, const FieldMode& in2,
                                              const BeamSplitterParams& p, SourceRegistry& reg,
                                              const std::string& name);

// out = sqrt(eta) in + sqrt(1-eta) vacuum; applied to companions as well.
FieldMode loss_element(const FieldMode& in, double efficiency, SourceRegistry& reg,
                       const std::string& name);

// Quadrature rotation R(theta) applied to every coefficient (and companions).
FieldMode phase_shift(const FieldMode& in, double theta);

// Single-pole filter cavity: out = H(w) in + sqrt(1-|H|^2) vacuum with
// H(w) = 1/(1 + i w/pole), identical on both quadratures. Companion light
// does not couple into the cavity mode and is not propagated.
FieldMode mode_cleaner(const FieldMode& in, double pole, SourceRegistry& reg,
                       const std::string& name);

// Registers "<name>.vac" (vacuum) and "<name>.noise" (classical, both
// quadratures carrying p.excess) and returns the emitted field.
FieldMode laser_source(const LaserNoiseParams& p, SourceRegistry& reg, const std::string& name);

// Detected field seen by a homodyne: the principal mode at amplitude
// `visibility`, the joined companion mode (sum of companions / sqrt(N)) at
// amplitude `unmatched_visibility`, and fresh vacuum filling the remaining
// fraction sqrt(1 - v^2 - u^2). Throws ConfigError if the two visibilities
// overfill the mode budget.
FieldMode homodyne_detected_field(const FieldMode& in, const HomodyneParams& p,
                                  SourceRegistry& reg, const std::string& name);

// Measured variance at one quadrature:
//   V = variance of the detected field at q  +  lo_suppression * (V_LO(q) - 1)
// where V_LO is the local-oscillator field's variance at the same quadrature.
double homodyne_variance_at(const FieldMode& detected, const FieldMode& lo,
                            double lo_suppression, const SourceRegistry& reg,
                            const Quadrature& q, double omega);

// Full spectra (plus, minus, and the configured angle if any) of a detected
// field over a grid.
SpectrumResult homodyne_measure(const FieldMode& detected, const HomodyneParams& p,
                                const FieldMode& lo, const SourceRegistry& reg,
                                const FrequencyGrid& grid);

// Back-of-envelope optical suppression (dB, positive = suppression) of
// source noise at a dark port, from combiner leakage times the relative
// detection efficiency of unmatched vs matched light:
//   leak(convention, V_combiner) * (unmatched_vis / matched_vis)^2
double suppression_estimate_db(double combiner_visibility, double matched_visibility,
                               double unmatched_visibility, LeakageConvention convention);

} // namespace sqznet
