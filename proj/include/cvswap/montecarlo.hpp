#pragma once

// Sampling emulation of the verifier's noise measurements.
//
// Every source variable of a model is drawn as an independent Gaussian; a
// quadrature form is then a weighted sum of those draws (done by the SIMD
// kernels). Each source gets its own random stream per chunk, so two forms
// over the same model (or over models with the same source registration,
// such as the fed-forward and blocked networks) see common random numbers.
//
// Spectrum-analyzer traces are statistical, not spectral: the 2 MHz
// sideband is a single Gaussian mode and the RBW/VBW ratio only sets how
// many squared samples are averaged into one displayed point.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cvswap/gaussian.hpp"
#include "cvswap/params.hpp"

namespace cvswap::montecarlo {

inline constexpr double kRbwHz = 10e3;
inline constexpr double kVbwHz = 30.0;
inline constexpr std::size_t kChunkSize = 4096;

/// round(RBW / VBW) = 333.
std::size_t default_n_per_point();

struct VarianceEstimate {
    double variance = 0.0;        // unbiased sample variance
    double standard_error = 0.0;  // variance * sqrt(2 / (n - 1)), exact for Gaussian samples
    std::size_t n = 0;
};

/// Draws n samples of `form`. Reproducible for a given seed, independent of
/// SIMD variant and thread count. Throws std::invalid_argument for n < 2.
VarianceEstimate estimate_variance(const gaussian::GaussianModel& model, const gaussian::QuadratureForm& form,
                                   std::size_t n, std::uint64_t seed);

/// Lower-level access: fills out[j] with sample j of `form`, drawn in
/// chunks of `chunk_size` samples (chunk k = samples [k*chunk_size, ...)).
void sample_form(const gaussian::GaussianModel& model, const gaussian::QuadratureForm& form, std::uint64_t seed,
                 std::size_t chunk_size, std::span<double> out);

enum class TraceKind { correlated, blocked, single_mode_a, single_mode_dprime, snl };

std::string_view trace_kind_name(TraceKind kind) noexcept;
/// Throws std::invalid_argument for an unknown name.
TraceKind parse_trace_kind(std::string_view name);

struct TraceSeries {
    TraceKind kind = TraceKind::snl;
    std::vector<double> db;  // one noise-power value per displayed point, dB relative to SNL
    std::uint64_t seed = 0;
    std::size_t n_per_point = 1;
    double analytic_linear = 1.0;  // exact variance of the sampled form

    /// dB of the mean linear power over all points.
    double mean_db() const;
    /// Standard error of mean_db() from the point-to-point scatter.
    double mean_db_standard_error() const;
};

/// Renders `points` displayed points, each 10*log10 of the mean of
/// n_per_point squared samples.
TraceSeries render_trace(const ExperimentParams& params, TraceKind kind, std::size_t points, std::uint64_t seed,
                         std::size_t n_per_point = default_n_per_point());

/// CSV with header "point_index,db_value", fixed 6-decimal values.
void write_trace_csv(const TraceSeries& trace, std::ostream& out);

/// Metadata sidecar: seed, n_per_point, RNG algorithm, the averaging model
/// and an echo of the parameters.
nlohmann::json trace_metadata(const TraceSeries& trace, const ExperimentParams& params);

}  // namespace cvswap::montecarlo
