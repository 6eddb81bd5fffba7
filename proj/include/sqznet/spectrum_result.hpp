#pragma once

#include <optional>
#include <vector>

#include "sqznet/errors.hpp"
#include "sqznet/frequency_grid.hpp"

namespace sqznet {

// Variance spectra of one detected field over a frequency grid, in
// shot-noise units. v_theta is present only when the detection requested
// a specific homodyne angle in addition to the two principal quadratures.
struct SpectrumResult {
    FrequencyGrid grid;
    std::vector<double> v_plus;
    std::vector<double> v_minus;
    std::optional<std::vector<double>> v_theta;

    SpectrumResult(FrequencyGrid g, std::vector<double> plus, std::vector<double> minus,
                   std::optional<std::vector<double>> theta = std::nullopt)
        : grid(std::move(g)),
          v_plus(std::move(plus)),
          v_minus(std::move(minus)),
          v_theta(std::move(theta)) {
        if (v_plus.size() != grid.size() || v_minus.size() != grid.size())
            throw InternalError("spectrum column length mismatch");
        if (v_theta && v_theta->size() != grid.size())
            throw InternalError("spectrum column length mismatch");
    }
};

} // namespace sqznet
