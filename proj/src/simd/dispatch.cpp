#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace cvswap::simd {

namespace {

constexpr Kernels kScalar{Isa::scalar, &scalar::combine_rows, &scalar::sum_squares};
#if defined(CVSWAP_HAVE_AVX2)
constexpr Kernels kAvx2{Isa::avx2, &avx2::combine_rows, &avx2::sum_squares};
#endif
#if defined(CVSWAP_HAVE_NEON)
constexpr Kernels kNeon{Isa::neon, &neon::combine_rows, &neon::sum_squares};
#endif

const Kernels& resolve_active() {
    if (const char* forced = std::getenv("CVSWAP_SIMD")) {
        const std::string name(forced);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (name == isa_name(isa) && isa_supported(isa)) return kernels_for(isa);
        }
    }
    if (isa_supported(Isa::avx2)) return kernels_for(Isa::avx2);
    if (isa_supported(Isa::neon)) return kernels_for(Isa::neon);
    return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(CVSWAP_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(CVSWAP_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Kernels& kernels_for(Isa isa) {
    if (!isa_supported(isa)) {
        throw std::invalid_argument("SIMD variant not available: " + std::string(isa_name(isa)));
    }
    switch (isa) {
#if defined(CVSWAP_HAVE_AVX2)
        case Isa::avx2: return kAvx2;
#endif
#if defined(CVSWAP_HAVE_NEON)
        case Isa::neon: return kNeon;
#endif
        default: return kScalar;
    }
}

const Kernels& active_kernels() {
    static const Kernels& chosen = resolve_active();
    return chosen;
}

}  // namespace cvswap::simd
