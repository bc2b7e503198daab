#pragma once

// Closed-form results for the swapped pair: output variance, optimal
// feedforward gain, gain normalization, dB/linear/squeezing conversions,
// electronic-noise correction and the two-variance inseparability verdict.
//
// Variances are in shot-noise units (SNL = 1). "dB below SNL" arguments are
// positive magnitudes; db_from_linear() returns a signed level (negative
// below the SNL).

#include <cstddef>
#include <span>
#include <vector>

#include "cvswap/params.hpp"

namespace cvswap::analytics {

/// Sum/difference photocurrent variance at the verifier for normalized gain
/// g_swap, as the eight-term closed form:
///
///   1/4 (eta xi3 - g eta xi4)^2 e^{2 r1} + 1/4 (sqrt(R) eta xi2 xi4 - g eta xi4)^2 e^{2 r2}
/// + 1/4 (eta xi3 + g eta xi4)^2 e^{-2 r1} + 1/4 (sqrt(R) eta xi2 xi4 + g eta xi4)^2 e^{-2 r2}
/// + 1 - eta^2 + 1/2 eta^2 (2 - xi3^2 - xi4^2) + 1/2 eta^2 (1 - R xi2^2) xi4^2
/// + g^2 (1 - eta^2 xi1^2) xi4^2 / xi1^2
///
/// Ignores params.gain and params.channel_blocked; the gain is the argument.
double variance_formula(const ExperimentParams& params, double g_swap);

/// Minimizer of variance_formula over g_swap, in its closed form.
double optimal_gain(const ExperimentParams& params);

/// g_swap actually applied for these params: 0 when the channel is blocked,
/// otherwise the fixed value or optimal_gain().
double resolve_gain(const ExperimentParams& params);

/// g_swap = sqrt(1-R) eta xi1 g / sqrt(2)  <=>  g = sqrt(2) g_swap / (sqrt(1-R) eta xi1).
double gain_to_electronic(double g_swap, const ExperimentParams& params);
double electronic_to_gain(double g, const ExperimentParams& params);

double db_from_linear(double v);
double linear_from_db(double db);
/// Squeezing parameter from a squeezing magnitude in dB: e^{-2r} = 10^{-dB/10}.
double r_from_db(double db);
double db_from_r(double r);

/// Removes an electronic noise floor from a measured level:
/// V = (V_meas - V_enl) / (1 - V_enl), all in linear SNL units. Both inputs
/// and the result are dB *below* the SNL.
double enl_correct(double measured_db_below_snl, double enl_db_below_snl);

/// Inverse of enl_correct: what a detector with the given electronic floor
/// would show for a true level of `true_db_below_snl`.
double enl_degrade(double true_db_below_snl, double enl_db_below_snl);

struct DuanVerdict {
    bool entangled = false;
    double margin = 0.0;  // 1 - max(v_plus, v_minus)
};

/// Round-off allowance: a variance must sit this far below 1 to count.
inline constexpr double kVerdictTolerance = 1e-12;

/// Both joint variances below the SNL by more than kVerdictTolerance.
DuanVerdict duan_verdict(double v_plus, double v_minus);

/// Fraction of initial entanglement kept after swapping, as a ratio of the
/// dB suppressions (1.43 dB of 4.9 dB -> 0.29).
double preserved_fraction(double initial_db, double swapped_db);

struct SweepGrid {
    std::vector<double> r1_values;
    std::vector<double> r2_values;
    std::vector<double> values;  // row-major: values[i * r2_values.size() + j]

    double at(std::size_t i, std::size_t j) const { return values.at(i * r2_values.size() + j); }
};

/// variance_formula at optimal_gain over the r1 x r2 grid; the efficiencies
/// and mirror come from `params`, its r1/r2 are overridden per grid point.
SweepGrid sweep_surface(const ExperimentParams& params, std::span<const double> r1_axis,
                        std::span<const double> r2_axis);

}  // namespace cvswap::analytics
