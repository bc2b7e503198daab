#pragma once

// First-principles model of the swapping network.
//
//   EPR(r1) -> a, b        EPR(r2) -> c, d
//   b, c : loss xi1, 50:50 Bell splitter, detector loss eta -> currents i+, i-
//   d    : loss xi2, mirror R mixes in a coherent beam beta0 carrying the
//          feedforward (sqrt(1-R) * g * i+/-), giving d'
//   a    : loss xi3, detector loss eta
//   d'   : loss xi4, detector loss eta
//   verifier: (X_a + X_d')/sqrt(2) and (Y_a - Y_d')/sqrt(2)
//
// The verifier forms are normalized so an all-vacuum network reads exactly 1.
//
// Bell splitter convention: the splitter maps (b, c) to ports
// ((b + c)/sqrt(2), (c - b)/sqrt(2)). i+ is the X quadrature of the first
// port; i- is the *negated* Y quadrature of the second port, so that
// i+ ~ X_b + X_c and i- ~ Y_b - Y_c.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvswap/gaussian.hpp"
#include "cvswap/params.hpp"

namespace cvswap::swap {

namespace labels {
inline constexpr std::string_view a = "a";
inline constexpr std::string_view b = "b";
inline constexpr std::string_view c = "c";
inline constexpr std::string_view d = "d";
inline constexpr std::string_view beta0 = "beta0";
}  // namespace labels

struct BellCurrents {
    gaussian::QuadratureForm i_plus;   // ~ X_b + X_c
    gaussian::QuadratureForm i_minus;  // ~ Y_b - Y_c
};

struct SwapNetwork {
    gaussian::GaussianModel model;  // live modes at the end: "a" and "d" (d'), as seen by the detectors
    BellCurrents currents;
    gaussian::QuadratureForm victor_sum;   // (X_a + X_d')/sqrt(2)
    gaussian::QuadratureForm victor_diff;  // (Y_a - Y_d')/sqrt(2)
    double g_swap = 0.0;
    double feed_gain = 0.0;  // sqrt(1-R) * g, coefficient of the currents in d'
};

struct VarianceReport {
    double v_plus = 0.0;
    double v_minus = 0.0;
    double v_plus_db = 0.0;
    double v_minus_db = 0.0;
    bool entangled = false;
    double g_swap_used = 0.0;
};

/// Claire's photocurrents read off the Bell splitter ports after detection.
/// Throws ModelError if either port is absent (the stage has not been built).
BellCurrents claire_currents(const gaussian::GaussianModel& model, std::string_view sum_port = labels::b,
                             std::string_view diff_port = labels::c);

/// Model up to and including Claire's detectors (modes a, b, c, d live).
gaussian::GaussianModel build_through_claire(const ExperimentParams& params);

/// Full network. params.gain is resolved first (Optimal -> closed-form optimum);
/// a blocked channel still mixes beta0 into d but applies no feedforward.
SwapNetwork build_network(const ExperimentParams& params);

VarianceReport run_experiment(const ExperimentParams& params);

/// Amplitude-quadrature variance of one verifier arm: "a", or "d"/"d'"/"dprime".
double single_mode_noise(const ExperimentParams& params, std::string_view which);

/// Random parameter draws: r in [0, 1.5], amplitude efficiencies in [0.5, 1],
/// R in [0.9, 1), fixed g_swap in [0, 1.5].
std::vector<ExperimentParams> random_draws(std::size_t count, std::uint64_t seed);

using VarianceFn = std::function<double(const ExperimentParams&, double g_swap)>;

struct VerifyOutcome {
    std::size_t checked = 0;
    double max_rel_deviation = 0.0;
    std::optional<ExperimentParams> worst;  // parameter set with the largest deviation
    std::vector<ExperimentParams> failures;
    bool passed() const noexcept { return failures.empty(); }
};

/// Compares the network oracle against a closed-form variance (by default
/// analytics::variance_formula) on every draw, both quadratures.
VerifyOutcome verify_oracle(std::span<const ExperimentParams> draws, double tolerance = 1e-9,
                            const VarianceFn& formula = {});

}  // namespace cvswap::swap
