#include "cvswap/params.hpp"

#include <cmath>
#include <string_view>
#include <utility>

#include <fmt/format.h>

#include "cvswap/error.hpp"

namespace cvswap {

namespace {

double amplitude_of(double intensity, std::string_view name) {
    if (!(intensity >= 0.0 && intensity <= 1.0)) {
        throw PhysicsError(fmt::format("{} must lie in [0, 1], got {}", name, intensity));
    }
    return std::sqrt(intensity);
}

void require_unit(double value, std::string_view name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw PhysicsError(fmt::format("{} must lie in [0, 1], got {}", name, value));
    }
}

}  // namespace

ExperimentParams ExperimentParams::from_intensities(double r1, double r2, const Intensities& eff,
                                                    double mirror_R, GainSpec gain) {
    ExperimentParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.xi1 = amplitude_of(eff.xi1_sq, "xi1^2");
    p.xi2 = amplitude_of(eff.xi2_sq, "xi2^2");
    p.xi3 = amplitude_of(eff.xi3_sq, "xi3^2");
    p.xi4 = amplitude_of(eff.xi4_sq, "xi4^2");
    p.eta = amplitude_of(eff.eta_sq, "eta^2");
    p.mirror_R = mirror_R;
    p.gain = gain;
    return p;
}

ExperimentParams ExperimentParams::reference_setup() {
    return from_intensities(0.564, 0.587, {0.970, 0.950, 0.966, 0.968, 0.90}, 0.98);
}

ExperimentParams::Intensities ExperimentParams::intensities() const {
    return {xi1 * xi1, xi2 * xi2, xi3 * xi3, xi4 * xi4, eta * eta};
}

void ExperimentParams::validate() const {
    for (const auto& [value, name] : {std::pair{r1, "r1"}, std::pair{r2, "r2"}}) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw PhysicsError(fmt::format("{} must be finite and >= 0, got {}", name, value));
        }
    }
    require_unit(xi1, "xi1");
    require_unit(xi2, "xi2");
    require_unit(xi3, "xi3");
    require_unit(xi4, "xi4");
    require_unit(eta, "eta");
    require_unit(mirror_R, "mirror reflectivity R");
    if (gain.mode == GainSpec::Mode::fixed && (!(gain.value >= 0.0) || !std::isfinite(gain.value))) {
        throw PhysicsError(fmt::format("fixed g_swap must be finite and >= 0, got {}", gain.value));
    }
    if (enl_db && !std::isfinite(*enl_db)) throw PhysicsError("enl_db must be finite");
}

}  // namespace cvswap
