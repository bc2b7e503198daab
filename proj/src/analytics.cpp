#include "cvswap/analytics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cvswap/error.hpp"

namespace cvswap::analytics {

double variance_formula(const ExperimentParams& p, double g_swap) {
    p.validate();
    if (!(g_swap >= 0.0) || !std::isfinite(g_swap)) {
        throw PhysicsError(fmt::format("g_swap must be finite and >= 0, got {}", g_swap));
    }
    if (p.xi1 == 0.0 && g_swap > 0.0) {
        throw PhysicsError("feedforward with xi1 = 0: the normalized gain needs a nonzero Bell-detector transmission");
    }

    const double eta = p.eta;
    const double eta2 = eta * eta;
    const double sqrt_r = std::sqrt(p.mirror_R);
    const double g = g_swap;

    const double up1 = std::exp(2.0 * p.r1);
    const double up2 = std::exp(2.0 * p.r2);
    const double dn1 = std::exp(-2.0 * p.r1);
    const double dn2 = std::exp(-2.0 * p.r2);

    const double a_minus = eta * p.xi3 - g * eta * p.xi4;
    const double d_minus = sqrt_r * eta * p.xi2 * p.xi4 - g * eta * p.xi4;
    const double a_plus = eta * p.xi3 + g * eta * p.xi4;
    const double d_plus = sqrt_r * eta * p.xi2 * p.xi4 + g * eta * p.xi4;

    double v = 0.25 * a_minus * a_minus * up1 + 0.25 * d_minus * d_minus * up2 +
               0.25 * a_plus * a_plus * dn1 + 0.25 * d_plus * d_plus * dn2;
    v += 1.0 - eta2;
    v += 0.5 * eta2 * (2.0 - p.xi3 * p.xi3 - p.xi4 * p.xi4);
    v += 0.5 * eta2 * (1.0 - p.mirror_R * p.xi2 * p.xi2) * p.xi4 * p.xi4;
    if (g != 0.0) {
        const double xi1_2 = p.xi1 * p.xi1;
        v += g * g * (1.0 - eta2 * xi1_2) * p.xi4 * p.xi4 / xi1_2;
    }
    return v;
}

double optimal_gain(const ExperimentParams& p) {
    p.validate();
    if (p.r1 + p.r2 == 0.0) return 0.0;

    const double eta2 = p.eta * p.eta;
    const double xi1_2 = p.xi1 * p.xi1;
    const double e2r1 = std::exp(2.0 * p.r1);
    const double e2r2 = std::exp(2.0 * p.r2);
    const double e4r1 = std::exp(4.0 * p.r1);
    const double e4r2 = std::exp(4.0 * p.r2);
    const double e2sum = std::exp(2.0 * (p.r1 + p.r2));

    const double numerator =
        eta2 * ((e4r1 - 1.0) * e2r2 * p.xi3 + e2r1 * (e4r2 - 1.0) * std::sqrt(p.mirror_R) * p.xi2 * p.xi4) * xi1_2;
    const double denominator =
        (4.0 * e2sum + eta2 * (e2r1 + e2r2 + std::exp(4.0 * p.r1 + 2.0 * p.r2) +
                               std::exp(2.0 * p.r1 + 4.0 * p.r2) - 4.0 * e2sum) * xi1_2) * p.xi4;

    if (denominator == 0.0) {
        throw PhysicsError("optimal gain undefined: xi4 = 0 leaves no path from the feedforward to the verifier");
    }
    return numerator / denominator;
}

double resolve_gain(const ExperimentParams& p) {
    if (p.channel_blocked) return 0.0;
    if (p.gain.mode == GainSpec::Mode::fixed) return p.gain.value;
    return optimal_gain(p);
}

double gain_to_electronic(double g_swap, const ExperimentParams& p) {
    if (p.mirror_R >= 1.0) throw PhysicsError("R = 1: the mirror has no feedforward port");
    const double scale = std::sqrt(1.0 - p.mirror_R) * p.eta * p.xi1 / std::sqrt(2.0);
    if (!(scale > 0.0)) throw PhysicsError("gain normalization needs eta > 0 and xi1 > 0");
    return g_swap / scale;
}

double electronic_to_gain(double g, const ExperimentParams& p) {
    if (!(p.mirror_R <= 1.0 && p.mirror_R >= 0.0)) throw PhysicsError("R must lie in [0, 1]");
    return std::sqrt(1.0 - p.mirror_R) * p.eta * p.xi1 * g / std::sqrt(2.0);
}

double db_from_linear(double v) {
    if (!(v > 0.0)) throw PhysicsError(fmt::format("dB of a nonpositive variance ({})", v));
    return 10.0 * std::log10(v);
}

double linear_from_db(double db) { return std::pow(10.0, db / 10.0); }

double r_from_db(double db) {
    if (!(db >= 0.0)) throw PhysicsError(fmt::format("squeezing magnitude must be >= 0 dB, got {}", db));
    return db * std::log(10.0) / 20.0;
}

double db_from_r(double r) {
    if (!(r >= 0.0)) throw PhysicsError(fmt::format("squeezing parameter must be >= 0, got {}", r));
    return 20.0 * r / std::log(10.0);
}

double enl_correct(double measured_db_below_snl, double enl_db_below_snl) {
    const double v_meas = linear_from_db(-measured_db_below_snl);
    const double v_enl = linear_from_db(-enl_db_below_snl);
    if (!(v_meas > v_enl)) {
        throw PhysicsError(fmt::format("measured level ({} dB below SNL) is at or below the electronic floor ({} dB)",
                                       measured_db_below_snl, enl_db_below_snl));
    }
    if (!(v_enl < 1.0)) throw PhysicsError("electronic noise floor must lie below the SNL");
    return -db_from_linear((v_meas - v_enl) / (1.0 - v_enl));
}

double enl_degrade(double true_db_below_snl, double enl_db_below_snl) {
    const double v_true = linear_from_db(-true_db_below_snl);
    const double v_enl = linear_from_db(-enl_db_below_snl);
    if (!(v_enl < 1.0)) throw PhysicsError("electronic noise floor must lie below the SNL");
    return -db_from_linear(v_true * (1.0 - v_enl) + v_enl);
}

DuanVerdict duan_verdict(double v_plus, double v_minus) {
    return {std::max(v_plus, v_minus) < 1.0 - kVerdictTolerance, 1.0 - std::max(v_plus, v_minus)};
}

double preserved_fraction(double initial_db, double swapped_db) {
    if (!(initial_db > 0.0)) {
        throw PhysicsError(fmt::format("initial entanglement must be > 0 dB, got {}", initial_db));
    }
    return swapped_db / initial_db;
}

SweepGrid sweep_surface(const ExperimentParams& params, std::span<const double> r1_axis,
                        std::span<const double> r2_axis) {
    if (r1_axis.empty() || r2_axis.empty()) throw PhysicsError("sweep axes must be nonempty");
    SweepGrid grid;
    grid.r1_values.assign(r1_axis.begin(), r1_axis.end());
    grid.r2_values.assign(r2_axis.begin(), r2_axis.end());
    grid.values.reserve(r1_axis.size() * r2_axis.size());
    ExperimentParams point = params;
    for (double r1 : r1_axis) {
        for (double r2 : r2_axis) {
            point.r1 = r1;
            point.r2 = r2;
            grid.values.push_back(variance_formula(point, optimal_gain(point)));
        }
    }
    return grid;
}

}  // namespace cvswap::analytics
