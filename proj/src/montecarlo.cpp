#include "cvswap/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "cvswap/analytics.hpp"
#include "cvswap/config.hpp"
#include "cvswap/rng.hpp"
#include "cvswap/simd/kernels.hpp"
#include "cvswap/swap.hpp"

namespace cvswap::montecarlo {

using gaussian::GaussianModel;
using gaussian::QuadratureForm;

namespace {

// Scaled coefficients c_i * sqrt(var_i) of the sources a form actually uses.
struct DenseForm {
    std::vector<std::uint32_t> source_ids;
    std::vector<double> weights;
};

DenseForm densify(const GaussianModel& model, const QuadratureForm& form) {
    (void)model.variance(form);  // registration check
    DenseForm dense;
    for (const auto& [id, c] : form.coefficients()) {
        const double var = model.sources()[id.value].variance;
        if (var == 0.0) continue;
        dense.source_ids.push_back(id.value);
        dense.weights.push_back(c * std::sqrt(var));
    }
    return dense;
}

using ChunkFn = std::function<void(std::size_t chunk, std::span<const double> samples)>;

// Calls fn once per chunk with that chunk's samples. Chunks may run on
// several threads; fn must only touch per-chunk state.
void for_each_chunk(const DenseForm& dense, std::uint64_t seed, std::size_t chunk_size, std::size_t total,
                    const ChunkFn& fn) {
    const std::size_t n_chunks = (total + chunk_size - 1) / chunk_size;
    const simd::Kernels& kernels = simd::active_kernels();
    const std::size_t rows = dense.source_ids.size();

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        std::vector<double> draws(rows * chunk_size);
        std::vector<double> samples(chunk_size);
        for (std::size_t k = next++; k < n_chunks; k = next++) {
            const std::size_t count = std::min(chunk_size, total - k * chunk_size);
            const std::uint64_t chunk_seed = rng::derive_seed(seed, k);
            for (std::size_t s = 0; s < rows; ++s) {
                rng::NormalSource gen(rng::derive_seed(chunk_seed, dense.source_ids[s]));
                gen.fill(std::span(draws).subspan(s * chunk_size, count));
            }
            const std::span<double> out(samples.data(), count);
            kernels.combine_rows(dense.weights, draws.data(), chunk_size, out);
            fn(k, out);
        }
    };

    const std::size_t threads =
        std::min<std::size_t>(n_chunks, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
}

QuadratureForm trace_form(const ExperimentParams& params, TraceKind kind, GaussianModel& model_out) {
    switch (kind) {
        case TraceKind::snl: {
            model_out = GaussianModel{}.add_vacuum_mode("snl");
            return model_out.x("snl");
        }
        case TraceKind::blocked: {
            ExperimentParams blocked = params;
            blocked.channel_blocked = true;
            swap::SwapNetwork net = swap::build_network(blocked);
            model_out = std::move(net.model);
            return net.victor_sum;
        }
        case TraceKind::correlated:
        case TraceKind::single_mode_a:
        case TraceKind::single_mode_dprime: {
            ExperimentParams open = params;
            open.channel_blocked = false;
            swap::SwapNetwork net = swap::build_network(open);
            model_out = std::move(net.model);
            if (kind == TraceKind::correlated) return net.victor_sum;
            return model_out.x(kind == TraceKind::single_mode_a ? swap::labels::a : swap::labels::d);
        }
    }
    throw std::invalid_argument("unknown trace kind");
}

}  // namespace

std::size_t default_n_per_point() { return static_cast<std::size_t>(std::lround(kRbwHz / kVbwHz)); }

void sample_form(const GaussianModel& model, const QuadratureForm& form, std::uint64_t seed, std::size_t chunk_size,
                 std::span<double> out) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
    const DenseForm dense = densify(model, form);
    for_each_chunk(dense, seed, chunk_size, out.size(), [&](std::size_t k, std::span<const double> samples) {
        std::copy(samples.begin(), samples.end(), out.begin() + static_cast<std::ptrdiff_t>(k * chunk_size));
    });
}

VarianceEstimate estimate_variance(const GaussianModel& model, const QuadratureForm& form, std::size_t n,
                                   std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("estimate_variance needs n >= 2");
    const DenseForm dense = densify(model, form);
    const std::size_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
    std::vector<simd::SumSquares> partial(n_chunks);
    const simd::Kernels& kernels = simd::active_kernels();
    for_each_chunk(dense, seed, kChunkSize, n, [&](std::size_t k, std::span<const double> samples) {
        partial[k] = kernels.sum_squares(samples);
    });

    double sum = 0.0;
    double sum_sq = 0.0;
    for (const auto& p : partial) {
        sum += p.sum;
        sum_sq += p.sum_sq;
    }
    const double dn = static_cast<double>(n);
    VarianceEstimate est;
    est.n = n;
    est.variance = std::max(0.0, (sum_sq - sum * sum / dn) / (dn - 1.0));
    est.standard_error = est.variance * std::sqrt(2.0 / (dn - 1.0));
    return est;
}

std::string_view trace_kind_name(TraceKind kind) noexcept {
    switch (kind) {
        case TraceKind::correlated: return "correlated";
        case TraceKind::blocked: return "blocked";
        case TraceKind::single_mode_a: return "single_mode_a";
        case TraceKind::single_mode_dprime: return "single_mode_dprime";
        case TraceKind::snl: return "snl";
    }
    return "unknown";
}

TraceKind parse_trace_kind(std::string_view name) {
    for (TraceKind kind : {TraceKind::correlated, TraceKind::blocked, TraceKind::single_mode_a,
                           TraceKind::single_mode_dprime, TraceKind::snl}) {
        if (name == trace_kind_name(kind)) return kind;
    }
    throw std::invalid_argument(fmt::format(
        "unknown trace kind '{}' (expected correlated, blocked, single_mode_a, single_mode_dprime or snl)", name));
}

double TraceSeries::mean_db() const {
    if (db.empty()) return 0.0;
    double total = 0.0;
    for (double v : db) total += analytics::linear_from_db(v);
    return analytics::db_from_linear(total / static_cast<double>(db.size()));
}

double TraceSeries::mean_db_standard_error() const {
    if (db.size() < 2) return 0.0;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double v : db) {
        const double lin = analytics::linear_from_db(v);
        sum += lin;
        sum_sq += lin * lin;
    }
    const double n = static_cast<double>(db.size());
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return 10.0 / std::log(10.0) * std::sqrt(var / n) / mean;
}

TraceSeries render_trace(const ExperimentParams& params, TraceKind kind, std::size_t points, std::uint64_t seed,
                         std::size_t n_per_point) {
    if (points < 1) throw std::invalid_argument("a trace needs at least one point");
    if (n_per_point < 1) throw std::invalid_argument("n_per_point must be >= 1");
    params.validate();

    GaussianModel model;
    const QuadratureForm form = trace_form(params, kind, model);

    TraceSeries trace;
    trace.kind = kind;
    trace.seed = seed;
    trace.n_per_point = n_per_point;
    trace.analytic_linear = model.variance(form);
    trace.db.resize(points);

    const simd::Kernels& kernels = simd::active_kernels();
    const DenseForm dense = densify(model, form);
    for_each_chunk(dense, seed, n_per_point, points * n_per_point, [&](std::size_t k, std::span<const double> samples) {
        const double power = kernels.sum_squares(samples).sum_sq / static_cast<double>(samples.size());
        trace.db[k] = 10.0 * std::log10(power);
    });
    return trace;
}

void write_trace_csv(const TraceSeries& trace, std::ostream& out) {
    out << "point_index,db_value\n";
    for (std::size_t i = 0; i < trace.db.size(); ++i) out << fmt::format("{},{:.6f}\n", i, trace.db[i]);
}

nlohmann::json trace_metadata(const TraceSeries& trace, const ExperimentParams& params) {
    return {
        {"kind", trace_kind_name(trace.kind)},
        {"points", trace.db.size()},
        {"seed", trace.seed},
        {"n_per_point", trace.n_per_point},
        {"rbw_hz", kRbwHz},
        {"vbw_hz", kVbwHz},
        {"rng", rng::kAlgorithm},
        {"averaging_model",
         "statistical: one Gaussian mode per beam at the analysis frequency; each point is 10*log10 of the mean of "
         "n_per_point squared samples (n_per_point = round(RBW/VBW) by default); no spectral synthesis"},
        {"analytic_db", analytics::db_from_linear(trace.analytic_linear)},
        {"mean_db", trace.mean_db()},
        {"params", config::params_to_json(params)},
    };
}

}  // namespace cvswap::montecarlo
