#include "kernels_impl.hpp"

#include <immintrin.h>

namespace cvswap::simd::avx2 {

void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out) {
    const std::size_t n = out.size();
    const std::size_t body = n & ~std::size_t{3};
    double* dst = out.data();

    for (std::size_t j = 0; j < body; j += 4) _mm256_storeu_pd(dst + j, _mm256_setzero_pd());
    for (std::size_t j = body; j < n; ++j) dst[j] = 0.0;

    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double* row = rows + i * stride;
        const __m256d c = _mm256_set1_pd(coeffs[i]);
        for (std::size_t j = 0; j < body; j += 4) {
            const __m256d term = _mm256_mul_pd(c, _mm256_loadu_pd(row + j));
            _mm256_storeu_pd(dst + j, _mm256_add_pd(_mm256_loadu_pd(dst + j), term));
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
    __m256d s = _mm256_setzero_pd();
    __m256d q = _mm256_setzero_pd();
    for (std::size_t j = 0; j < body; j += 4) {
        const __m256d v = _mm256_loadu_pd(src + j);
        s = _mm256_add_pd(s, v);
        q = _mm256_add_pd(q, _mm256_mul_pd(v, v));
    }
    alignas(32) double sl[4];
    alignas(32) double ql[4];
    _mm256_store_pd(sl, s);
    _mm256_store_pd(ql, q);
    SumSquares out{(sl[0] + sl[1]) + (sl[2] + sl[3]), (ql[0] + ql[1]) + (ql[2] + ql[3])};
    for (std::size_t j = body; j < values.size(); ++j) {
        const double v = src[j];
        out.sum = out.sum + v;
        out.sum_sq = out.sum_sq + v * v;
    }
    return out;
}

}  // namespace cvswap::simd::avx2
