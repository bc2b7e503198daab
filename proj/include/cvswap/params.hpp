#pragma once

#include <optional>

namespace cvswap {

/// Feedforward gain setting, expressed as the normalized gain g_swap.
struct GainSpec {
    enum class Mode { fixed, optimal };

    Mode mode = Mode::optimal;
    double value = 0.0;  // used only when mode == fixed

    static GainSpec optimal() { return {Mode::optimal, 0.0}; }
    static GainSpec fixed(double g_swap) { return {Mode::fixed, g_swap}; }

    bool is_optimal() const noexcept { return mode == Mode::optimal; }
    friend bool operator==(const GainSpec&, const GainSpec&) = default;
};

/// Full parameter set of the swapping experiment.
///
/// All efficiencies are *amplitude* values (xi, eta); the lab quotes the
/// intensity values xi^2, eta^2. Use from_intensities() at input boundaries.
///
///   xi1 - modes b and c on their way to the Bell detector
///   xi2 - mode d before the feedforward mirror
///   xi3 - mode a on its way to the verifier
///   xi4 - displaced mode d' on its way to the verifier
///   eta - every photodetector (all four share one value)
struct ExperimentParams {
    double r1 = 0.0;
    double r2 = 0.0;
    double xi1 = 1.0;
    double xi2 = 1.0;
    double xi3 = 1.0;
    double xi4 = 1.0;
    double eta = 1.0;
    double mirror_R = 0.98;
    GainSpec gain = GainSpec::optimal();
    bool channel_blocked = false;
    std::optional<double> enl_db;  // electronic noise level, dB below SNL

    struct Intensities {
        double xi1_sq = 1.0, xi2_sq = 1.0, xi3_sq = 1.0, xi4_sq = 1.0, eta_sq = 1.0;
        friend bool operator==(const Intensities&, const Intensities&) = default;
    };

    static ExperimentParams from_intensities(double r1, double r2, const Intensities& eff, double mirror_R,
                                             GainSpec gain = GainSpec::optimal());

    /// Reference experiment: r1 = 0.564, r2 = 0.587,
    /// xi^2 = (0.970, 0.950, 0.966, 0.968), eta^2 = 0.90, R = 0.98.
    static ExperimentParams reference_setup();

    Intensities intensities() const;

    /// Throws PhysicsError on any out-of-domain value.
    void validate() const;

    friend bool operator==(const ExperimentParams&, const ExperimentParams&) = default;
};

}  // namespace cvswap
