#pragma once

#include <ostream>
#include <string>

#include "sqznet/spectrum_result.hpp"

namespace sqznet {

// Shortest round-trip decimal form of a double (std::to_chars), locale
// independent. Used by the serializer.
std::string format_double(double v);

// Fixed 9-significant-digit general form used by the CSV writer; '.' decimal
// separator regardless of locale.
std::string format_double_9(double v);

// CSV schema:
//   # sqznet v1
//   frequency_hz,v_plus,v_minus,v_theta,db_plus,db_minus
// with the v_theta cell empty when no measurement angle was configured.
// '\n' line endings; deterministic byte-for-byte for identical inputs.
void write_csv(std::ostream& os, const SpectrumResult& result);

// Per-detector one-line summary: minimum dB value of v_plus with its
// frequency, and the squeezing floor (lowest grid frequency f such that
// v_plus < 1 from f to the end of the grid; reported as "none" if the top
// of the grid is not squeezed).
std::string summarize(const std::string& detector, const SpectrumResult& result);

} // namespace sqznet
