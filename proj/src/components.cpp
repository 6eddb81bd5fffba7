#include "sqznet/components.hpp"

#include <cmath>
#include <string>

namespace sqznet {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok)
        throw ConfigError(msg);
}

} // namespace

// ---------------------------------------------------------------------------
// Parameter validation
// ---------------------------------------------------------------------------

void OpaParams::validate() const {
    require(gamma_ic >= 0.0 && gamma_oc >= 0.0 && gamma_l >= 0.0,
            "cavity decay rates must be >= 0");
    require(gamma() > 0.0, "total cavity decay rate must be > 0");
    require(std::isfinite(nonlinearity), "nonlinearity must be finite");
    if (std::abs(nonlinearity) >= gamma())
        throw ThresholdError("|nonlinearity| >= total decay rate: at or above oscillation "
                             "threshold");
}

void BeamSplitterParams::validate() const {
    require(ratio >= 0.0 && ratio <= 1.0, "beam splitter ratio must be in [0,1]");
    require(std::isfinite(phase), "beam splitter phase must be finite");
    require(visibility >= 0.0 && visibility <= 1.0, "visibility must be in [0,1]");
}

void LaserNoiseParams::validate() const {
    require(relax_height >= 0.0, "relax_height must be >= 0");
    require(floor >= 0.0, "floor must be >= 0");
    require(lf_exponent >= 0.0, "lf_exponent must be >= 0");
    require(lf_corner >= 0.0, "lf_corner must be >= 0");
    if (relax_height > 0.0) {
        require(relax_freq > 0.0, "relax_freq must be > 0 when relax_height > 0");
        require(relax_width > 0.0, "relax_width must be > 0 when relax_height > 0");
    } else {
        require(relax_freq >= 0.0 && relax_width >= 0.0, "rates must be >= 0");
    }
}

double LaserNoiseParams::excess(double omega) const {
    double v = floor;
    if (relax_height > 0.0) {
        const double w2 = omega * omega;
        const double wr2 = relax_freq * relax_freq;
        const double g2 = relax_width * relax_width;
        const double det = (w2 - wr2) * (w2 - wr2) + g2 * w2;
        v += relax_height * g2 * wr2 / det;
    }
    if (lf_exponent > 0.0 && lf_corner > 0.0)
        v += std::pow(lf_corner / omega, lf_exponent);
    return v;
}

void HomodyneParams::validate() const {
    require(visibility >= 0.0 && visibility <= 1.0, "homodyne visibility must be in [0,1]");
    require(unmatched_visibility >= 0.0 && unmatched_visibility <= 1.0,
            "unmatched visibility must be in [0,1]");
    require(lo_suppression >= 0.0 && lo_suppression <= 1.0,
            "lo_suppression must be a power ratio in [0,1]");
    if (angle)
        require(std::isfinite(*angle), "homodyne angle must be finite");
}

// ---------------------------------------------------------------------------
// Cavity transfer
// ---------------------------------------------------------------------------

OpaTransfer opa_transfer(const OpaParams& p, double omega) {
    p.validate();
    const double g = p.gamma();
    const double y = p.nonlinearity;
    const double c_ic = 2.0 * std::sqrt(p.gamma_oc * p.gamma_ic);
    const double c_l = 2.0 * std::sqrt(p.gamma_oc * p.gamma_l);
    const cplx den_p(g - y, omega);  // i w - Y + g
    const cplx den_m(g + y, omega);  // i w + Y + g
    OpaTransfer t;
    t.t_ic = {c_ic / den_p, c_ic / den_m};
    t.t_l = {c_l / den_p, c_l / den_m};
    t.t_oc = {2.0 * p.gamma_oc / den_p - 1.0, 2.0 * p.gamma_oc / den_m - 1.0};
    return t;
}

FieldMode opa_apply(const FieldMode& seed, const OpaParams& p, SourceRegistry& reg,
                    const std::string& name, const FieldMode* loss_port_input) {
    p.validate();
    FieldMode out;
    if (p.gamma_oc * p.gamma_ic > 0.0) {
        for (const auto& [id, fn] : seed.coeffs) {
            CoeffFn c = fn;
            out.accumulate(id, 1.0, [p, c](double w) {
                return opa_transfer(p, w).t_ic.diag() * c(w);
            });
        }
    }
    if (p.gamma_oc * p.gamma_l > 0.0) {
        if (loss_port_input) {
            for (const auto& [id, fn] : loss_port_input->coeffs) {
                CoeffFn c = fn;
                out.accumulate(id, 1.0, [p, c](double w) {
                    return opa_transfer(p, w).t_l.diag() * c(w);
                });
            }
        } else {
            const std::string id = reg.add_fresh_vacuum(name + ".l").id;
            out.accumulate(id, 1.0, [p](double w) { return opa_transfer(p, w).t_l.diag(); });
        }
    }
    const std::string oc = reg.add_fresh_vacuum(name + ".oc").id;
    out.accumulate(oc, 1.0, [p](double w) { return opa_transfer(p, w).t_oc.diag(); });
    return out;
}

// ---------------------------------------------------------------------------
// Linear elements
// ---------------------------------------------------------------------------

namespace {

// in through a loss channel of power efficiency eta, topped up with a fresh
// vacuum so the output is a complete mode.
FieldMode loss_channel(const FieldMode& in, double eta, SourceRegistry& reg,
                       const std::string& hint) {
    FieldMode out;
    const double t = std::sqrt(eta);
    for (const auto& [id, fn] : in.coeffs)
        out.accumulate(id, t, fn);
    if (eta < 1.0) {
        const std::string vac = reg.add_fresh_vacuum(hint).id;
        out.accumulate(vac, std::sqrt(1.0 - eta), [](double) { return Mat2::identity(); });
    }
    return out;
}

} // namespace

std::pair<FieldMode, FieldMode> beam_splitter(const FieldMode& in1, const FieldMode& in2,
                                              const BeamSplitterParams& p, SourceRegistry& reg,
                                              const std::string& name) {
    p.validate();
    const double tr = std::sqrt(p.ratio);       // reflected amplitude
    const double tt = std::sqrt(1.0 - p.ratio); // transmitted amplitude
    const cplx ph = std::polar(1.0, p.phase);
    const double v = p.visibility;

    // Matched components: amplitude fraction v of each input interferes;
    // the mode is completed with fresh vacuum.
    FieldMode m1 = in1, m2 = in2;
    if (v < 1.0) {
        const double fill = std::sqrt(1.0 - v * v);
        m1 = FieldMode::linear_combine(v, in1, 0.0, FieldMode());
        m1.companions.clear();
        m1.accumulate(reg.add_fresh_vacuum(name + ".u1").id, fill,
                      [](double) { return Mat2::identity(); });
        m2 = FieldMode::linear_combine(v, in2, 0.0, FieldMode());
        m2.companions.clear();
        m2.accumulate(reg.add_fresh_vacuum(name + ".u2").id, fill,
                      [](double) { return Mat2::identity(); });
    } else {
        m1.companions.clear();
        m2.companions.clear();
    }

    FieldMode out1 = FieldMode::linear_combine(tr, m1, ph * tt, m2);
    FieldMode out2 = FieldMode::linear_combine(tt, m1, -ph * tr, m2);

    // Unmatched remainders: each input's orthogonal component splits by the
    // same power ratio but interferes with nothing; per output it behaves as
    // the input through a loss channel of efficiency split*(1-v^2).
    if (v < 1.0) {
        const double leak = 1.0 - v * v;
        FieldMode bare1 = in1, bare2 = in2;
        bare1.companions.clear();
        bare2.companions.clear();
        auto add_companion = [&](FieldMode& port, const FieldMode& src, double split,
                                 const char* tag) {
            const double eta = split * leak;
            if (eta <= 0.0 || src.coeffs.empty())
                return;
            port.companions.push_back(loss_channel(src, eta, reg, name + tag));
        };
        add_companion(out1, bare1, p.ratio, ".c1a");
        add_companion(out1, bare2, 1.0 - p.ratio, ".c1b");
        add_companion(out2, bare1, 1.0 - p.ratio, ".c2a");
        add_companion(out2, bare2, p.ratio, ".c2b");
    }

    // Companions already riding on the inputs split by the power ratio
    // without interfering.
    auto route_companions = [&](const std::vector<FieldMode>& comps, double eta1, double eta2,
                                const char* tag) {
        int i = 0;
        for (const auto& comp : comps) {
            const std::string hint = name + tag + std::to_string(i++);
            if (eta1 > 0.0)
                out1.companions.push_back(loss_channel(comp, eta1, reg, hint + "o1"));
            if (eta2 > 0.0)
                out2.companions.push_back(loss_channel(comp, eta2, reg, hint + "o2"));
        }
    };
    route_companions(in1.companions, p.ratio, 1.0 - p.ratio, ".p1_");
    route_companions(in2.companions, 1.0 - p.ratio, p.ratio, ".p2_");

    return {std::move(out1), std::move(out2)};
}

FieldMode loss_element(const FieldMode& in, double efficiency, SourceRegistry& reg,
                       const std::string& name) {
    require(efficiency >= 0.0 && efficiency <= 1.0, "loss efficiency must be in [0,1]");
    FieldMode bare = in;
    bare.companions.clear();
    FieldMode out = loss_channel(bare, efficiency, reg, name + ".vac");
    int i = 0;
    for (const auto& comp : in.companions)
        out.companions.push_back(
            loss_channel(comp, efficiency, reg, name + ".c" + std::to_string(i++)));
    return out;
}

FieldMode phase_shift(const FieldMode& in, double theta) {
    require(std::isfinite(theta), "phase shift angle must be finite");
    return FieldMode::matrix_apply(Mat2::rotation(theta), in);
}

FieldMode mode_cleaner(const FieldMode& in, double pole, SourceRegistry& reg,
                       const std::string& name) {
    require(pole > 0.0, "mode cleaner pole must be > 0");
    FieldMode out;
    for (const auto& [id, fn] : in.coeffs) {
        CoeffFn c = fn;
        out.coeffs.emplace(id, [pole, c](double w) {
            const cplx h = 1.0 / cplx(1.0, w / pole);
            return h * c(w);
        });
    }
    const std::string vac = reg.add_fresh_vacuum(name + ".vac").id;
    out.coeffs.emplace(vac, [pole](double w) {
        const cplx h = 1.0 / cplx(1.0, w / pole);
        return std::sqrt(1.0 - std::norm(h)) * Mat2::identity();
    });
    return out;
}

FieldMode laser_source(const LaserNoiseParams& p, SourceRegistry& reg, const std::string& name) {
    p.validate();
    FieldMode out;
    out.coeffs.emplace(reg.add_vacuum(name + ".vac").id,
                       [](double) { return Mat2::identity(); });
    SpectrumFn excess = [p](double w) { return p.excess(w); };
    out.coeffs.emplace(reg.add_classical(name + ".noise", excess, excess).id,
                       [](double) { return Mat2::identity(); });
    return out;
}

// ---------------------------------------------------------------------------
// Homodyne detection
// ---------------------------------------------------------------------------

FieldMode homodyne_detected_field(const FieldMode& in, const HomodyneParams& p,
                                  SourceRegistry& reg, const std::string& name) {
    p.validate();
    const double v = p.visibility;
    const double u = in.companions.empty() ? 0.0 : p.unmatched_visibility;
    const double fill_sq = 1.0 - v * v - u * u;
    if (fill_sq < -1e-12)
        throw ConfigError("homodyne visibility budget exceeds unity: visibility^2 + "
                          "unmatched_visibility^2 > 1");

    FieldMode principal = in;
    principal.companions.clear();
    FieldMode detected = FieldMode::linear_combine(v, principal, 0.0, FieldMode());
    if (u > 0.0) {
        // All companions beat against the local oscillator through one
        // effective mode: their normalized sum.
        const double scale = u / std::sqrt(static_cast<double>(in.companions.size()));
        for (const auto& comp : in.companions)
            for (const auto& [id, fn] : comp.coeffs)
                detected.accumulate(id, scale, fn);
    }
    if (fill_sq > 1e-12) {
        detected.accumulate(reg.add_fresh_vacuum(name + ".fill").id, std::sqrt(fill_sq),
                            [](double) { return Mat2::identity(); });
    }
    return detected;
}

double homodyne_variance_at(const FieldMode& detected, const FieldMode& lo,
                            double lo_suppression, const SourceRegistry& reg,
                            const Quadrature& q, double omega) {
    double v = detected.variance(reg, q, omega);
    if (lo_suppression > 0.0 && !lo.empty())
        v += lo_suppression * (lo.variance(reg, q, omega) - 1.0);
    return v;
}

SpectrumResult homodyne_measure(const FieldMode& detected, const HomodyneParams& p,
                                const FieldMode& lo, const SourceRegistry& reg,
                                const FrequencyGrid& grid) {
    std::vector<double> vp(grid.size()), vm(grid.size());
    std::optional<std::vector<double>> vt;
    if (p.angle)
        vt.emplace(grid.size());
    const Quadrature qa = p.angle ? Quadrature::angle(*p.angle) : Quadrature::plus();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid.omega(i);
        vp[i] = homodyne_variance_at(detected, lo, p.lo_suppression, reg, Quadrature::plus(), w);
        vm[i] = homodyne_variance_at(detected, lo, p.lo_suppression, reg, Quadrature::minus(), w);
        if (vt)
            (*vt)[i] = homodyne_variance_at(detected, lo, p.lo_suppression, reg, qa, w);
    }
    return SpectrumResult(grid, std::move(vp), std::move(vm), std::move(vt));
}

double suppression_estimate_db(double combiner_visibility, double matched_visibility,
                               double unmatched_visibility, LeakageConvention convention) {
    require(combiner_visibility > 0.0 && combiner_visibility <= 1.0,
            "combiner visibility must be in (0,1]");
    require(matched_visibility > 0.0 && matched_visibility <= 1.0,
            "matched visibility must be in (0,1]");
    require(unmatched_visibility > 0.0 && unmatched_visibility <= 1.0,
            "unmatched visibility must be in (0,1]");
    const double leak = convention == LeakageConvention::OneMinusV
                            ? 1.0 - combiner_visibility
                            : 1.0 - combiner_visibility * combiner_visibility;
    if (leak <= 0.0)
        throw ConfigError("perfect combiner visibility leaves nothing to suppress");
    const double rel = unmatched_visibility / matched_visibility;
    return -10.0 * std::log10(leak * rel * rel);
}

} // namespace sqznet
