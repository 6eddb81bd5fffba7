#include "sqznet/csv_report.hpp"

#include <charconv>
#include <sstream>
#include <system_error>

#include "sqznet/errors.hpp"
#include "sqznet/field_mode.hpp"

namespace sqznet {

namespace {

std::string to_chars_str(double v, std::optional<int> precision) {
    char buf[64];
    std::to_chars_result r =
        precision ? std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general,
                                  *precision)
                  : std::to_chars(buf, buf + sizeof(buf), v);
    if (r.ec != std::errc())
        throw InternalError("number formatting failed");
    return std::string(buf, r.ptr);
}

} // namespace

std::string format_double(double v) { return to_chars_str(v, std::nullopt); }

std::string format_double_9(double v) { return to_chars_str(v, 9); }

void write_csv(std::ostream& os, const SpectrumResult& result) {
    os << "# sqznet v1\n";
    os << "frequency_hz,v_plus,v_minus,v_theta,db_plus,db_minus\n";
    for (std::size_t i = 0; i < result.grid.size(); ++i) {
        os << format_double_9(result.grid.hz(i)) << ',' << format_double_9(result.v_plus[i])
           << ',' << format_double_9(result.v_minus[i]) << ',';
        if (result.v_theta)
            os << format_double_9((*result.v_theta)[i]);
        os << ',' << format_double_9(to_db(result.v_plus[i])) << ','
           << format_double_9(to_db(result.v_minus[i])) << '\n';
    }
}

std::string summarize(const std::string& detector, const SpectrumResult& result) {
    std::size_t min_i = 0;
    for (std::size_t i = 1; i < result.grid.size(); ++i)
        if (result.v_plus[i] < result.v_plus[min_i])
            min_i = i;

    // Lowest grid frequency from which v_plus stays below shot noise.
    std::optional<std::size_t> floor_i;
    for (std::size_t i = result.grid.size(); i-- > 0;) {
        if (result.v_plus[i] < 1.0)
            floor_i = i;
        else
            break;
    }

    std::ostringstream os;
    os << detector << ": min " << format_double_9(to_db(result.v_plus[min_i])) << " dB at "
       << format_double_9(result.grid.hz(min_i)) << " Hz; squeezing floor ";
    if (floor_i)
        os << format_double_9(result.grid.hz(*floor_i)) << " Hz";
    else
        os << "none";
    return os.str();
}

} // namespace sqznet
