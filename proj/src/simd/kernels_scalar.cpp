#include "kernels_impl.hpp"

#include <algorithm>

namespace cvswap::simd::scalar {

void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double c = coeffs[i];
        const double* row = rows + i * stride;
        for (std::size_t j = 0; j < out.size(); ++j) {
            const double term = c * row[j];
            out[j] = out[j] + term;
        }
    }
}

SumSquares sum_squares(std::span<const double> values) {
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    double q[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t body = values.size() & ~std::size_t{3};
    for (std::size_t j = 0; j < body; j += 4) {
        for (std::size_t k = 0; k < 4; ++k) {
            const double v = values[j + k];
            const double sq = v * v;
            s[k] = s[k] + v;
            q[k] = q[k] + sq;
        }
    }
    SumSquares out{(s[0] + s[1]) + (s[2] + s[3]), (q[0] + q[1]) + (q[2] + q[3])};
    for (std::size_t j = body; j < values.size(); ++j) {
        const double v = values[j];
        out.sum = out.sum + v;
        out.sum_sq = out.sum_sq + v * v;
    }
    return out;
}

}  // namespace cvswap::simd::scalar
