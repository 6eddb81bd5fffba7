#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sqznet/errors.hpp"
#include "sqznet/frequency_grid.hpp"
#include "sqznet/mat2.hpp"
#include "sqznet/noise_source.hpp"

namespace sqznet {

// Frequency-dependent 2x2 coefficient of one noise source in a field:
// row 0 couples into the field's amplitude quadrature, row 1 into its
// phase quadrature; column 0 reads the source's amplitude fluctuation,
// column 1 its phase fluctuation.
using CoeffFn = std::function<Mat2(double)>;

// Quadrature selector: a fixed pair of weights (c, s) so that the measured
// operator is c*X+ + s*X-. Stored as evaluated weights rather than an angle
// so that the axis cases are exact.
struct Quadrature {
    double cos_w = 1.0;
    double sin_w = 0.0;

    static Quadrature plus() { return {1.0, 0.0}; }
    static Quadrature minus() { return {0.0, 1.0}; }
    static Quadrature angle(double theta) { return {std::cos(theta), std::sin(theta)}; }
};

// One optical mode, represented as a table of per-source coefficient
// functions plus an optional list of companion modes (imperfectly
// overlapped light that co-propagates and is seen by a detector but does
// not interfere with the principal mode).
class FieldMode {
  public:
    std::map<std::string, CoeffFn> coeffs;
    std::vector<FieldMode> companions;

    FieldMode() = default;

    // Field consisting of exactly one source with the given coefficient.
    static FieldMode single(const std::string& source_id, CoeffFn c) {
        FieldMode f;
        f.coeffs.emplace(source_id, std::move(c));
        return f;
    }

    // Field reading one source with a frequency-independent coefficient.
    static FieldMode single_const(const std::string& source_id, Mat2 m) {
        return single(source_id, [m](double) { return m; });
    }

    bool empty() const { return coeffs.empty() && companions.empty(); }

    // Coefficient of `source_id` at omega; zero matrix if absent.
    Mat2 coefficient(const std::string& source_id, double omega) const {
        auto it = coeffs.find(source_id);
        if (it == coeffs.end())
            return Mat2::zero();
        return it->second(omega);
    }

    // Accumulate scale*coeff into this field's entry for source_id.
    void accumulate(const std::string& source_id, cplx scale, const CoeffFn& c) {
        auto it = coeffs.find(source_id);
        if (it == coeffs.end()) {
            if (scale == cplx(1.0, 0.0)) {
                coeffs.emplace(source_id, c);
            } else {
                coeffs.emplace(source_id, [scale, c](double w) { return scale * c(w); });
            }
        } else {
            CoeffFn prev = it->second;
            it->second = [prev, scale, c](double w) { return prev(w) + scale * c(w); };
        }
    }

    // Accumulate a left matrix product m*coeff into this field.
    void accumulate_mat(const std::string& source_id, Mat2 m, const CoeffFn& c) {
        auto it = coeffs.find(source_id);
        if (it == coeffs.end()) {
            coeffs.emplace(source_id, [m, c](double w) { return m * c(w); });
        } else {
            CoeffFn prev = it->second;
            it->second = [prev, m, c](double w) { return prev(w) + m * c(w); };
        }
    }

    // a*x + b*y over all sources present in either field (companions are
    // carried along unscaled from both operands).
    static FieldMode linear_combine(cplx a, const FieldMode& x, cplx b, const FieldMode& y);

    // m*x with matrix coefficients (used by quadrature rotations and
    // frequency filters acting differently on the two quadratures).
    static FieldMode matrix_apply(Mat2 m, const FieldMode& x);
    static FieldMode matrix_apply(std::function<Mat2(double)> m, const FieldMode& x);

    // Noise variance of the quadrature q of this mode at omega, in
    // shot-noise units, summing |projected row|^2 weighted by each
    // source's quadrature spectra. Companions contribute additively
    // (they do not interfere with the principal mode).
    double variance(const SourceRegistry& reg, const Quadrature& q, double omega) const;

    // Sum over sources of |q-projected row|^2 restricted to sources of one
    // kind. Useful for budget introspection (e.g. how much classical laser
    // noise leaks into a dark port).
    double projected_weight(const std::string& source_id, const Quadrature& q, double omega) const;
};

// Per-point variance of a field over a whole grid.
std::vector<double> variance_of(const FieldMode& field, const SourceRegistry& reg,
                                const FrequencyGrid& grid, const Quadrature& q);

// 10*log10(v); rejects nonpositive variances.
inline double to_db(double v) {
    if (!(v > 0.0))
        throw ConfigError("variance must be > 0 to convert to dB");
    return 10.0 * std::log10(v);
}

} // namespace sqznet
