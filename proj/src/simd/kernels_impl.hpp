#pragma once

#include "cvswap/simd/kernels.hpp"

namespace cvswap::simd {

namespace scalar {
void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out);
SumSquares sum_squares(std::span<const double> values);
}  // namespace scalar

#if defined(CVSWAP_HAVE_AVX2)
namespace avx2 {
void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out);
SumSquares sum_squares(std::span<const double> values);
}  // namespace avx2
#endif

#if defined(CVSWAP_HAVE_NEON)
namespace neon {
void combine_rows(std::span<const double> coeffs, const double* rows, std::size_t stride, std::span<double> out);
SumSquares sum_squares(std::span<const double> values);
}  // namespace neon
#endif

}  // namespace cvswap::simd
