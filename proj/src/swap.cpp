#include "cvswap/swap.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "cvswap/analytics.hpp"
#include "cvswap/error.hpp"
#include "cvswap/rng.hpp"

namespace cvswap::swap {

using gaussian::GaussianModel;
using gaussian::QuadratureForm;

BellCurrents claire_currents(const GaussianModel& model, std::string_view sum_port, std::string_view diff_port) {
    if (!model.has_mode(sum_port) || !model.has_mode(diff_port)) {
        throw ModelError(fmt::format("Bell detection stage missing: ports '{}'/'{}' not in model", sum_port,
                                     diff_port));
    }
    return {model.x(sum_port), -model.y(diff_port)};
}

GaussianModel build_through_claire(const ExperimentParams& params) {
    params.validate();
    return GaussianModel{}
        .add_epr_pair(labels::a, labels::b, params.r1)
        .add_epr_pair(labels::c, labels::d, params.r2)
        .loss(labels::b, params.xi1)
        .loss(labels::c, params.xi1)
        .beamsplitter(labels::b, labels::c, 1.0 / std::sqrt(2.0))
        .loss(labels::b, params.eta)
        .loss(labels::c, params.eta);
}

SwapNetwork build_network(const ExperimentParams& params) {
    params.validate();
    SwapNetwork net;
    net.g_swap = analytics::resolve_gain(params);
    if (!params.channel_blocked && net.g_swap > 0.0) {
        net.feed_gain = std::sqrt(1.0 - params.mirror_R) * analytics::gain_to_electronic(net.g_swap, params);
    }

    GaussianModel model = build_through_claire(params);
    net.currents = claire_currents(model);
    model = model.remove_mode(labels::b).remove_mode(labels::c);

    model = model.loss(labels::d, params.xi2)
                .add_vacuum_mode(labels::beta0)
                .beamsplitter(labels::d, labels::beta0, std::sqrt(params.mirror_R))
                .remove_mode(labels::beta0);
    if (net.feed_gain != 0.0) {
        model = model.displace_by_form(labels::d, net.currents.i_plus, net.currents.i_minus, net.feed_gain);
    }

    model = model.loss(labels::a, params.xi3)
                .loss(labels::d, params.xi4)
                .loss(labels::a, params.eta)
                .loss(labels::d, params.eta);

    const double h = 1.0 / std::sqrt(2.0);
    net.victor_sum = h * (model.x(labels::a) + model.x(labels::d));
    net.victor_diff = h * (model.y(labels::a) - model.y(labels::d));
    net.model = std::move(model);
    return net;
}

VarianceReport run_experiment(const ExperimentParams& params) {
    const SwapNetwork net = build_network(params);
    VarianceReport report;
    report.v_plus = net.model.variance(net.victor_sum);
    report.v_minus = net.model.variance(net.victor_diff);
    report.v_plus_db = analytics::db_from_linear(report.v_plus);
    report.v_minus_db = analytics::db_from_linear(report.v_minus);
    report.entangled = analytics::duan_verdict(report.v_plus, report.v_minus).entangled;
    report.g_swap_used = net.g_swap;
    return report;
}

double single_mode_noise(const ExperimentParams& params, std::string_view which) {
    std::string_view label;
    if (which == "a") {
        label = labels::a;
    } else if (which == "d" || which == "d'" || which == "dprime") {
        label = labels::d;
    } else {
        throw ModelError(fmt::format("unknown verifier mode '{}' (expected a or d')", which));
    }
    const SwapNetwork net = build_network(params);
    return net.model.variance(net.model.x(label));
}

std::vector<ExperimentParams> random_draws(std::size_t count, std::uint64_t seed) {
    rng::NormalSource gen(rng::derive_seed(seed, 0));
    std::vector<ExperimentParams> draws;
    draws.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        ExperimentParams p;
        p.r1 = gen.uniform(0.0, 1.5);
        p.r2 = gen.uniform(0.0, 1.5);
        p.xi1 = gen.uniform(0.5, 1.0);
        p.xi2 = gen.uniform(0.5, 1.0);
        p.xi3 = gen.uniform(0.5, 1.0);
        p.xi4 = gen.uniform(0.5, 1.0);
        p.eta = gen.uniform(0.5, 1.0);
        p.mirror_R = gen.uniform(0.9, 1.0);
        p.gain = GainSpec::fixed(gen.uniform(0.0, 1.5));
        draws.push_back(p);
    }
    return draws;
}

VerifyOutcome verify_oracle(std::span<const ExperimentParams> draws, double tolerance, const VarianceFn& formula) {
    const VarianceFn closed_form = formula ? formula : VarianceFn(analytics::variance_formula);
    VerifyOutcome outcome;
    for (const ExperimentParams& p : draws) {
        const VarianceReport oracle = run_experiment(p);
        const double expected = closed_form(p, oracle.g_swap_used);
        const double dev = std::max(std::abs(oracle.v_plus - expected), std::abs(oracle.v_minus - expected)) /
                           std::abs(expected);
        ++outcome.checked;
        if (!(dev <= tolerance)) outcome.failures.push_back(p);
        if (!outcome.worst || dev > outcome.max_rel_deviation || std::isnan(dev)) {
            outcome.max_rel_deviation = dev;
            outcome.worst = p;
        }
    }
    return outcome;
}

}  // namespace cvswap::swap
