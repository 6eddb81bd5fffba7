#include "sqznet/field_mode.hpp"

#include <cmath>

namespace sqznet {

FieldMode FieldMode::linear_combine(cplx a, const FieldMode& x, cplx b, const FieldMode& y) {
    FieldMode out;
    for (const auto& [id, fn] : x.coeffs)
        out.accumulate(id, a, fn);
    for (const auto& [id, fn] : y.coeffs)
        out.accumulate(id, b, fn);
    out.companions = x.companions;
    out.companions.insert(out.companions.end(), y.companions.begin(), y.companions.end());
    return out;
}

FieldMode FieldMode::matrix_apply(Mat2 m, const FieldMode& x) {
    FieldMode out;
    for (const auto& [id, fn] : x.coeffs)
        out.accumulate_mat(id, m, fn);
    for (const auto& comp : x.companions)
        out.companions.push_back(matrix_apply(m, comp));
    return out;
}

FieldMode FieldMode::matrix_apply(std::function<Mat2(double)> m, const FieldMode& x) {
    FieldMode out;
    for (const auto& [id, fn] : x.coeffs) {
        CoeffFn c = fn;
        out.coeffs.emplace(id, [m, c](double w) { return m(w) * c(w); });
    }
    for (const auto& comp : x.companions)
        out.companions.push_back(matrix_apply(m, comp));
    return out;
}

namespace {

// |q-projected row|^2 of one coefficient matrix, split by source quadrature:
// returns (|r0|^2, |r1|^2) with r = cos_w * row0 + sin_w * row1.
std::pair<double, double> projected_row_norms(const Mat2& m, const Quadrature& q) {
    const cplx r0 = q.cos_w * m.a + q.sin_w * m.c;
    const cplx r1 = q.cos_w * m.b + q.sin_w * m.d;
    return {std::norm(r0), std::norm(r1)};
}

} // namespace

double FieldMode::variance(const SourceRegistry& reg, const Quadrature& q, double omega) const {
    double v = 0.0;
    for (const auto& [id, fn] : coeffs) {
        const NoiseSource& src = reg.at(id);
        const auto [w_plus, w_minus] = projected_row_norms(fn(omega), q);
        if (w_plus > 0.0)
            v += w_plus * src.v_plus(omega);
        if (w_minus > 0.0)
            v += w_minus * src.v_minus(omega);
    }
    for (const auto& comp : companions)
        v += comp.variance(reg, q, omega);
    if (v < 0.0 || !std::isfinite(v))
        throw InternalError("variance evaluation produced an invalid value");
    return v;
}

double FieldMode::projected_weight(const std::string& source_id, const Quadrature& q,
                                   double omega) const {
    double w = 0.0;
    auto it = coeffs.find(source_id);
    if (it != coeffs.end()) {
        const auto [w_plus, w_minus] = projected_row_norms(it->second(omega), q);
        w += w_plus + w_minus;
    }
    for (const auto& comp : companions)
        w += comp.projected_weight(source_id, q, omega);
    return w;
}

std::vector<double> variance_of(const FieldMode& field, const SourceRegistry& reg,
                                const FrequencyGrid& grid, const Quadrature& q) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = field.variance(reg, q, grid.omega(i));
    return out;
}

} // namespace sqznet
