#include "kernels_impl.hpp"

#include <arm_neon.h>

namespace cvswap::simd::neon {

void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out) {
    const std::size_t n = out.size();
    const std::size_t body = n & ~std::size_t{1};
    double* dst = out.data();

    for (std::size_t j = 0; j < n; ++j) dst[j] = 0.0;

    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double* row = rows + i * stride;
        const float64x2_t c = vdupq_n_f64(coeffs[i]);
        for (std::size_t j = 0; j < body; j += 2) {
            // vmulq + vaddq, not vfmaq: results must match the scalar reference bit for bit.
            const float64x2_t term = vmulq_f64(c, vld1q_f64(row + j));
            vst1q_f64(dst + j, vaddq_f64(vld1q_f64(dst + j), term));
        }
        for (std::size_t j = body; j < n; ++j) {
            const double term = coeffs[i] * row[j];
            dst[j] = dst[j] + term;
        }
    }
}

SumSquares sum_squares(std::span<const double> values) {
    const std::size_t body = values.size() & ~std::size_t{3};
    const double* src = values.data();
    float64x2_t s01 = vdupq_n_f64(0.0), s23 = vdupq_n_f64(0.0);
    float64x2_t q01 = vdupq_n_f64(0.0), q23 = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < body; j += 4) {
        const float64x2_t v01 = vld1q_f64(src + j);
        const float64x2_t v23 = vld1q_f64(src + j + 2);
        s01 = vaddq_f64(s01, v01);
        s23 = vaddq_f64(s23, v23);
        q01 = vaddq_f64(q01, vmulq_f64(v01, v01));
        q23 = vaddq_f64(q23, vmulq_f64(v23, v23));
    }
    SumSquares out{(vgetq_lane_f64(s01, 0) + vgetq_lane_f64(s01, 1)) + (vgetq_lane_f64(s23, 0) + vgetq_lane_f64(s23, 1)),
                   (vgetq_lane_f64(q01, 0) + vgetq_lane_f64(q01, 1)) + (vgetq_lane_f64(q23, 0) + vgetq_lane_f64(q23, 1))};
    for (std::size_t j = body; j < values.size(); ++j) {
        const double v = src[j];
        out.sum = out.sum + v;
        out.sum_sq = out.sum_sq + v * v;
    }
    return out;
}

}  // namespace cvswap::simd::neon
