#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sqznet/errors.hpp"

namespace sqznet {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Ordered list of sideband frequencies. Points must be strictly positive
// and strictly increasing; DC is deliberately excluded (low-frequency
// classical noise models may diverge there). Both the Hz and the rad/s
// views are stored so that user-specified Hz endpoints survive exactly.
class FrequencyGrid {
  public:
    static FrequencyGrid from_angular(std::vector<double> omega) {
        std::vector<double> hz(omega.size());
        for (std::size_t i = 0; i < omega.size(); ++i)
            hz[i] = omega[i] / two_pi;
        return FrequencyGrid(std::move(hz), std::move(omega));
    }

    static FrequencyGrid linear_hz(double fmin_hz, double fmax_hz, std::size_t points) {
        return from_hz(fill(fmin_hz, fmax_hz, points, false));
    }

    static FrequencyGrid log_hz(double fmin_hz, double fmax_hz, std::size_t points) {
        return from_hz(fill(fmin_hz, fmax_hz, points, true));
    }

    const std::vector<double>& angular() const { return omega_; }
    std::size_t size() const { return omega_.size(); }
    double omega(std::size_t i) const { return omega_[i]; }
    double hz(std::size_t i) const { return hz_[i]; }

  private:
    static FrequencyGrid from_hz(std::vector<double> hz) {
        std::vector<double> omega(hz.size());
        for (std::size_t i = 0; i < hz.size(); ++i)
            omega[i] = two_pi * hz[i];
        return FrequencyGrid(std::move(hz), std::move(omega));
    }

    FrequencyGrid(std::vector<double> hz, std::vector<double> omega)
        : hz_(std::move(hz)), omega_(std::move(omega)) {
        if (omega_.empty())
            throw ConfigError("frequency grid must be nonempty");
        double prev = 0.0;
        for (double w : omega_) {
            if (!(w > 0.0) || !std::isfinite(w))
                throw ConfigError("frequency grid points must be finite and > 0");
            if (w <= prev)
                throw ConfigError("frequency grid points must be strictly increasing");
            prev = w;
        }
    }

    static std::vector<double> fill(double fmin_hz, double fmax_hz, std::size_t points, bool log) {
        if (points == 0)
            throw ConfigError("frequency grid must be nonempty");
        if (points == 1) {
            if (fmin_hz != fmax_hz)
                throw ConfigError("single-point grid requires fmin == fmax");
            return {fmin_hz};
        }
        if (!(fmin_hz < fmax_hz))
            throw ConfigError("fmin must be < fmax");
        if (log && !(fmin_hz > 0.0))
            throw ConfigError("log grid requires fmin > 0");
        std::vector<double> f(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(points - 1);
            f[i] = log ? fmin_hz * std::pow(fmax_hz / fmin_hz, t)
                       : fmin_hz + (fmax_hz - fmin_hz) * t;
        }
        // Guard the endpoints against pow() rounding.
        f.front() = fmin_hz;
        f.back() = fmax_hz;
        return f;
    }

    std::vector<double> hz_;
    std::vector<double> omega_;
};

} // namespace sqznet
