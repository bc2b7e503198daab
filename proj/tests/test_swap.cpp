#include <doctest.h>

#include <cmath>
#include <vector>

#include "cvswap/analytics.hpp"
#include "cvswap/error.hpp"
#include "cvswap/swap.hpp"
#include "oracles.hpp"

using namespace cvswap;
using cvswap::gaussian::QuadratureForm;

namespace {

ExperimentParams reference_with_gain(double g_swap) {
    ExperimentParams p = ExperimentParams::reference_setup();
    p.gain = GainSpec::fixed(g_swap);
    return p;
}

}  // namespace

TEST_SUITE("swap") {

TEST_CASE("all-vacuum perfect network reads exactly the SNL") {
    ExperimentParams p;
    p.gain = GainSpec::fixed(0.0);
    const swap::VarianceReport report = swap::run_experiment(p);
    CHECK(std::abs(report.v_plus - 1.0) <= 1e-12);
    CHECK(std::abs(report.v_minus - 1.0) <= 1e-12);
    CHECK_FALSE(report.entangled);

    // Feedforward of pure vacuum noise only adds noise.
    p.gain = GainSpec::fixed(0.5);
    CHECK(swap::run_experiment(p).v_plus > 1.0);
}

TEST_CASE("reference operating point") {
    SUBCASE("fixed g_swap = 0.741") {
        const swap::VarianceReport r = swap::run_experiment(reference_with_gain(0.741));
        CHECK(r.v_plus == doctest::Approx(0.719).epsilon(0.001 / 0.719));
        CHECK(r.v_minus == doctest::Approx(0.719).epsilon(0.001 / 0.719));
        CHECK(r.entangled);
        CHECK(r.g_swap_used == 0.741);
    }
    SUBCASE("optimal gain") {
        const swap::VarianceReport r = swap::run_experiment(ExperimentParams::reference_setup());
        CHECK(r.g_swap_used == doctest::Approx(0.741).epsilon(0.005 / 0.741));
        CHECK(r.v_plus == doctest::Approx(0.719).epsilon(0.001 / 0.719));
        CHECK(r.v_plus_db == doctest::Approx(-1.43).epsilon(0.01 / 1.43));
        CHECK(r.v_plus_db == doctest::Approx(10.0 * std::log10(r.v_plus)).epsilon(1e-14));
    }
    SUBCASE("blocked channel") {
        ExperimentParams p = ExperimentParams::reference_setup();
        p.channel_blocked = true;
        const swap::VarianceReport r = swap::run_experiment(p);
        CHECK(r.g_swap_used == 0.0);
        CHECK(r.v_plus == doctest::Approx(1.620).epsilon(0.001 / 1.62));
        CHECK(r.v_plus_db == doctest::Approx(2.10).epsilon(0.01 / 2.1));
        CHECK_FALSE(r.entangled);
    }
}

TEST_CASE("lossless chain reaches the -2.37 dB bound") {
    ExperimentParams p;
    p.r1 = 0.564;
    p.r2 = 0.587;
    p.mirror_R = 0.98;
    const swap::VarianceReport r = swap::run_experiment(p);
    CHECK(r.v_plus == doctest::Approx(0.5795).epsilon(0.0005 / 0.5795));
    CHECK(r.v_plus_db == doctest::Approx(-2.37).epsilon(0.01 / 2.37));
}

TEST_CASE("no squeezing is never entangled") {
    ExperimentParams p = ExperimentParams::reference_setup();
    p.r1 = 0.0;
    p.r2 = 0.0;
    const swap::VarianceReport r = swap::run_experiment(p);
    CHECK(r.g_swap_used == 0.0);
    CHECK(r.v_plus >= 1.0 - 1e-12);
    CHECK_FALSE(r.entangled);
}

TEST_CASE("network matches the covariance-matrix oracle") {
    for (const ExperimentParams& p : swap::random_draws(200, 99)) {
        const swap::VarianceReport r = swap::run_experiment(p);
        const oracle::SwapVariances ref = oracle::swap_network(p, r.g_swap_used);
        CHECK(r.v_plus == doctest::Approx(ref.v_plus).epsilon(1e-10));
        CHECK(r.v_minus == doctest::Approx(ref.v_minus).epsilon(1e-10));
        CHECK(swap::single_mode_noise(p, "a") == doctest::Approx(ref.var_xa).epsilon(1e-10));
        CHECK(swap::single_mode_noise(p, "d'") == doctest::Approx(ref.var_xd).epsilon(1e-10));
    }
}

TEST_CASE("single-mode noise") {
    ExperimentParams vac;
    CHECK(swap::single_mode_noise(vac, "a") == doctest::Approx(1.0).epsilon(1e-15));

    ExperimentParams lossless;
    lossless.r1 = 0.564;
    lossless.r2 = 0.587;
    lossless.channel_blocked = true;
    CHECK(swap::single_mode_noise(lossless, "a") == doctest::Approx(std::cosh(1.128)).epsilon(1e-13));
    CHECK(swap::single_mode_noise(lossless, "a") == doctest::Approx(1.706).epsilon(1e-3));
    CHECK(10.0 * std::log10(swap::single_mode_noise(lossless, "a")) == doctest::Approx(2.32).epsilon(0.01 / 2.32));

    const ExperimentParams ref = ExperimentParams::reference_setup();
    const double loss_chain = 0.90 * 0.966;
    CHECK(swap::single_mode_noise(ref, "a") ==
          doctest::Approx(loss_chain * std::cosh(1.128) + 1.0 - loss_chain).epsilon(1e-12));
    CHECK(swap::single_mode_noise(ref, "a") == doctest::Approx(1.614).epsilon(1e-3));
    CHECK(swap::single_mode_noise(ref, "dprime") == swap::single_mode_noise(ref, "d"));
    CHECK(swap::single_mode_noise(ref, "dprime") > 1.0);
    CHECK_THROWS_AS((void)swap::single_mode_noise(ref, "b"), ModelError);
}

TEST_CASE("Claire's currents") {
    SUBCASE("perfect vacuum chain") {
        const auto model = swap::build_through_claire(ExperimentParams{});
        const swap::BellCurrents cur = swap::claire_currents(model);
        CHECK(model.variance(cur.i_plus) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(model.variance(cur.i_minus) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("lossless with squeezing") {
        ExperimentParams p;
        p.r1 = 0.564;
        p.r2 = 0.587;
        const auto model = swap::build_through_claire(p);
        const swap::BellCurrents cur = swap::claire_currents(model);
        // X_b and X_c are independent, each with variance cosh(2r).
        const double expected = (std::cosh(1.128) + std::cosh(1.174)) / 2.0;
        CHECK(model.variance(cur.i_plus) == doctest::Approx(expected).epsilon(1e-13));
        CHECK(model.variance(cur.i_plus) == doctest::Approx(1.742).epsilon(1e-3));
        CHECK(model.variance(cur.i_minus) == doctest::Approx(expected).epsilon(1e-13));
        // Sign convention: i+ ~ X_b + X_c, i- ~ Y_b - Y_c, read through the
        // correlations with the untouched partners a and d.
        const double s1 = std::sinh(1.128) / std::sqrt(2.0);
        const double s2 = std::sinh(1.174) / std::sqrt(2.0);
        CHECK(model.covariance(cur.i_plus, model.x("a")) == doctest::Approx(-s1).epsilon(1e-13));
        CHECK(model.covariance(cur.i_plus, model.x("d")) == doctest::Approx(-s2).epsilon(1e-13));
        CHECK(model.covariance(cur.i_minus, model.y("a")) == doctest::Approx(s1).epsilon(1e-13));
        CHECK(model.covariance(cur.i_minus, model.y("d")) == doctest::Approx(-s2).epsilon(1e-13));
    }
    SUBCASE("missing stage") {
        CHECK_THROWS_AS((void)swap::claire_currents(gaussian::GaussianModel{}), ModelError);
    }
    SUBCASE("without feedforward a and d stay separable") {
        ExperimentParams p = ExperimentParams::reference_setup();
        p.channel_blocked = true;
        const swap::SwapNetwork net = swap::build_network(p);
        CHECK(net.model.covariance(net.model.x("a"), net.model.x("d")) == 0.0);
        CHECK(net.model.covariance(net.model.y("a"), net.model.y("d")) == 0.0);
        CHECK_FALSE(swap::run_experiment(p).entangled);
    }
}

TEST_CASE("feedforward with R = 1 has no port") {
    ExperimentParams p = reference_with_gain(0.5);
    p.mirror_R = 1.0;
    CHECK_THROWS_AS((void)swap::run_experiment(p), PhysicsError);
    p.gain = GainSpec::fixed(0.0);
    CHECK_NOTHROW((void)swap::run_experiment(p));
}

TEST_CASE("invalid parameters are rejected") {
    ExperimentParams p = ExperimentParams::reference_setup();
    p.xi2 = 1.2;
    CHECK_THROWS_AS((void)swap::run_experiment(p), PhysicsError);
    p = ExperimentParams::reference_setup();
    p.r1 = -0.1;
    CHECK_THROWS_AS((void)swap::run_experiment(p), PhysicsError);
    p = ExperimentParams::reference_setup();
    p.mirror_R = -0.1;
    CHECK_THROWS_AS((void)swap::run_experiment(p), PhysicsError);
    p = reference_with_gain(-1.0);
    CHECK_THROWS_AS((void)swap::run_experiment(p), PhysicsError);
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: oracle equals closed form on 1000 random draws") {
    const std::vector<ExperimentParams> draws = swap::random_draws(1000, 7);
    const swap::VerifyOutcome outcome = swap::verify_oracle(draws, 1e-9);
    CHECK(outcome.checked == 1000);
    CHECK(outcome.passed());
    CHECK(outcome.max_rel_deviation < 1e-9);
}

TEST_CASE("property: v_plus equals v_minus") {
    for (const ExperimentParams& p : swap::random_draws(300, 13)) {
        const swap::VarianceReport r = swap::run_experiment(p);
        CHECK(r.v_plus == doctest::Approx(r.v_minus).epsilon(1e-12));
    }
}

TEST_CASE("property: more balanced squeezing never hurts at optimal gain") {
    // Along r1 = r2. Squeezing one beam alone only adds noise at the verifier.
    ExperimentParams p = ExperimentParams::reference_setup();
    double prev = INFINITY;
    for (int k = 0; k <= 30; ++k) {
        p.r1 = p.r2 = 0.05 * k;
        const double v = swap::run_experiment(p).v_plus;
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
    p.r2 = 0.0;
    p.r1 = 0.5;
    CHECK(swap::run_experiment(p).v_plus > 1.0);
}

TEST_CASE("property: blocked channel never looks entangled") {
    for (ExperimentParams p : swap::random_draws(300, 21)) {
        p.channel_blocked = true;
        const swap::VarianceReport r = swap::run_experiment(p);
        CHECK(r.v_plus >= 1.0 - 1e-12);
        CHECK_FALSE(r.entangled);
    }
}

TEST_CASE("property: classical displacements of a or d' change no variance") {
    for (const ExperimentParams& p : swap::random_draws(50, 4)) {
        const swap::SwapNetwork net = swap::build_network(p);
        const auto shifted = net.model
                                 .displace_by_form("a", QuadratureForm::constant(3.5), QuadratureForm::constant(-1.0), 1.0)
                                 .displace_by_form("d", QuadratureForm::constant(-7.0), QuadratureForm::constant(2.0), 1.0);
        const double h = 1.0 / std::sqrt(2.0);
        const QuadratureForm sum = h * (shifted.x("a") + shifted.x("d"));
        const QuadratureForm diff = h * (shifted.y("a") - shifted.y("d"));
        CHECK(shifted.variance(sum) == net.model.variance(net.victor_sum));
        CHECK(shifted.variance(diff) == net.model.variance(net.victor_diff));
        CHECK(sum.classical_offset() != 0.0);
    }
}

TEST_CASE("verify_oracle flags a corrupted closed form") {
    const std::vector<ExperimentParams> draws = swap::random_draws(20, 1);
    const swap::VarianceFn corrupted = [](const ExperimentParams& p, double g) {
        return analytics::variance_formula(p, g) + 1e-6;
    };
    const swap::VerifyOutcome outcome = swap::verify_oracle(draws, 1e-9, corrupted);
    CHECK_FALSE(outcome.passed());
    CHECK(outcome.failures.size() == 20);
    REQUIRE(outcome.worst.has_value());
    CHECK(outcome.max_rel_deviation > 1e-7);
}

}  // TEST_SUITE
