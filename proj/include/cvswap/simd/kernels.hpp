#pragma once

// Data-parallel inner loops of the Monte Carlo sampler.
//
// Every variant performs the same floating-point operations in the same
// order (no fused multiply-add, four interleaved accumulation lanes), so all
// ISAs produce bit-identical results. The scalar variant is the reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace cvswap::simd {

enum class Isa { scalar, avx2, neon };

struct SumSquares {
    double sum = 0.0;
    double sum_sq = 0.0;
};

/// out[j] = sum_i coeffs[i] * rows[i * stride + j] for j < out.size(),
/// accumulated in ascending i starting from 0.0.
using CombineRowsFn = void (*)(std::span<const double> coeffs, const double* rows, std::size_t stride,
                               std::span<double> out);

/// Sum and sum of squares with lanes j % 4 for the first 4*floor(n/4)
/// elements, combined as (l0 + l1) + (l2 + l3), then the tail added in order.
using SumSquaresFn = SumSquares (*)(std::span<const double> values);

struct Kernels {
    Isa isa;
    CombineRowsFn combine_rows;
    SumSquaresFn sum_squares;
};

std::string_view isa_name(Isa isa) noexcept;

/// True if this binary carries the variant and the running CPU can execute it.
bool isa_supported(Isa isa) noexcept;

/// Throws std::invalid_argument for an unsupported ISA.
const Kernels& kernels_for(Isa isa);

/// Best supported variant, unless the CVSWAP_SIMD environment variable
/// (scalar | avx2 | neon) names another supported one. Resolved once.
const Kernels& active_kernels();

}  // namespace cvswap::simd
