#include "cvswap/gaussian.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "cvswap/error.hpp"

namespace cvswap::gaussian {

namespace {

void require_unit_interval(double value, std::string_view what) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw PhysicsError(fmt::format("{} must lie in [0, 1], got {}", what, value));
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadratureForm

QuadratureForm QuadratureForm::single(SourceId id, double coefficient) {
    QuadratureForm form;
    form.add_term(id, coefficient);
    return form;
}

QuadratureForm QuadratureForm::constant(double offset) {
    QuadratureForm form;
    form.offset_ = offset;
    return form;
}

double QuadratureForm::coefficient(SourceId id) const {
    const auto it = coefficients_.find(id);
    return it == coefficients_.end() ? 0.0 : it->second;
}

void QuadratureForm::add_term(SourceId id, double coefficient) {
    if (coefficient == 0.0) return;
    auto [it, inserted] = coefficients_.try_emplace(id, coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0.0) coefficients_.erase(it);
    }
}

QuadratureForm& QuadratureForm::operator+=(const QuadratureForm& other) {
    for (const auto& [id, c] : other.coefficients_) add_term(id, c);
    offset_ += other.offset_;
    return *this;
}

QuadratureForm& QuadratureForm::operator-=(const QuadratureForm& other) {
    for (const auto& [id, c] : other.coefficients_) add_term(id, -c);
    offset_ -= other.offset_;
    return *this;
}

QuadratureForm& QuadratureForm::operator*=(double scale) {
    if (scale == 0.0) {
        coefficients_.clear();
    } else {
        for (auto& [id, c] : coefficients_) c *= scale;
    }
    offset_ *= scale;
    return *this;
}

// ---------------------------------------------------------------------------
// GaussianModel

SourceId GaussianModel::register_source(double variance, std::string tag) {
    if (!(variance >= 0.0) || !std::isfinite(variance)) {
        throw PhysicsError(fmt::format("source variance must be finite and >= 0, got {}", variance));
    }
    const SourceId id{static_cast<std::uint32_t>(sources_.size())};
    sources_.push_back({id, variance, std::move(tag)});
    return id;
}

bool GaussianModel::has_mode(std::string_view label) const { return modes_.find(label) != modes_.end(); }

const ModeForms& GaussianModel::mode(std::string_view label) const {
    const auto it = modes_.find(label);
    if (it == modes_.end()) throw ModelError(fmt::format("unknown mode '{}'", label));
    return it->second;
}

ModeForms& GaussianModel::mode_mut(std::string_view label) {
    const auto it = modes_.find(label);
    if (it == modes_.end()) throw ModelError(fmt::format("unknown mode '{}'", label));
    return it->second;
}

std::vector<std::string> GaussianModel::mode_labels() const {
    std::vector<std::string> labels;
    labels.reserve(modes_.size());
    for (const auto& entry : modes_) labels.push_back(entry.first);
    return labels;
}

void GaussianModel::require_unused(std::string_view label) const {
    if (label.empty()) throw ModelError("mode label must not be empty");
    if (has_mode(label)) throw ModelError(fmt::format("mode '{}' already exists", label));
}

void GaussianModel::require_registered(const QuadratureForm& form) const {
    for (const auto& [id, c] : form.coefficients()) {
        if (id.value >= sources_.size()) {
            throw ModelError(fmt::format("form references unregistered source #{}", id.value));
        }
    }
}

GaussianModel GaussianModel::add_vacuum_mode(std::string_view label) const {
    require_unused(label);
    GaussianModel next = *this;
    const std::string name(label);
    const SourceId sx = next.register_source(1.0, "vac(" + name + ").x");
    const SourceId sy = next.register_source(1.0, "vac(" + name + ").y");
    next.modes_.emplace(name, ModeForms{QuadratureForm::single(sx), QuadratureForm::single(sy)});
    return next;
}

GaussianModel GaussianModel::add_epr_pair(std::string_view label_a, std::string_view label_b, double r) const {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw PhysicsError(fmt::format("squeezing parameter must be finite and >= 0, got {}", r));
    }
    require_unused(label_a);
    require_unused(label_b);
    if (label_a == label_b) throw ModelError("EPR pair needs two distinct labels");

    GaussianModel next = *this;
    const std::string tag = fmt::format("epr({},{})", label_a, label_b);
    const double squeezed = std::exp(-2.0 * r);
    const double antisqueezed = std::exp(2.0 * r);
    const SourceId x_sum = next.register_source(squeezed, tag + ".x+");
    const SourceId x_diff = next.register_source(antisqueezed, tag + ".x-");
    const SourceId y_sum = next.register_source(antisqueezed, tag + ".y+");
    const SourceId y_diff = next.register_source(squeezed, tag + ".y-");

    const double h = 1.0 / std::sqrt(2.0);
    ModeForms a{QuadratureForm::single(x_sum, h) + QuadratureForm::single(x_diff, h),
                QuadratureForm::single(y_sum, h) + QuadratureForm::single(y_diff, h)};
    ModeForms b{QuadratureForm::single(x_sum, h) - QuadratureForm::single(x_diff, h),
                QuadratureForm::single(y_sum, h) - QuadratureForm::single(y_diff, h)};
    next.modes_.emplace(std::string(label_a), std::move(a));
    next.modes_.emplace(std::string(label_b), std::move(b));
    return next;
}

GaussianModel GaussianModel::beamsplitter(std::string_view label_1, std::string_view label_2,
                                          double transmittance_amplitude) const {
    require_unit_interval(transmittance_amplitude, "beamsplitter transmittance amplitude");
    if (label_1 == label_2) throw ModelError("beamsplitter needs two distinct modes");
    const ModeForms& in1 = mode(label_1);
    const ModeForms& in2 = mode(label_2);
    if (transmittance_amplitude == 1.0) return *this;

    const double t = transmittance_amplitude;
    const double s = std::sqrt(1.0 - t * t);
    ModeForms out1{t * in1.x + s * in2.x, t * in1.y + s * in2.y};
    ModeForms out2{-s * in1.x + t * in2.x, -s * in1.y + t * in2.y};

    GaussianModel next = *this;
    next.mode_mut(label_1) = std::move(out1);
    next.mode_mut(label_2) = std::move(out2);
    return next;
}

GaussianModel GaussianModel::loss(std::string_view label, double xi) const {
    require_unit_interval(xi, "loss amplitude transmission");
    const ModeForms& in = mode(label);
    if (xi == 1.0) return *this;

    GaussianModel next = *this;
    const std::uint32_t k = next.vacuum_counter_++;
    const std::string tag = fmt::format("vac(loss:{})#{}", label, k);
    const SourceId vx = next.register_source(1.0, tag + ".x");
    const SourceId vy = next.register_source(1.0, tag + ".y");
    const double leak = std::sqrt(1.0 - xi * xi);
    next.mode_mut(label) = ModeForms{xi * in.x + QuadratureForm::single(vx, leak),
                                     xi * in.y + QuadratureForm::single(vy, leak)};
    return next;
}

GaussianModel GaussianModel::displace_by_form(std::string_view label, const QuadratureForm& x_add,
                                              const QuadratureForm& y_add, double gain) const {
    require_registered(x_add);
    require_registered(y_add);
    (void)mode(label);
    GaussianModel next = *this;
    ModeForms& target = next.mode_mut(label);
    target.x += gain * x_add;
    target.y += gain * y_add;
    return next;
}

GaussianModel GaussianModel::remove_mode(std::string_view label) const {
    (void)mode(label);
    GaussianModel next = *this;
    next.modes_.erase(next.modes_.find(label));
    return next;
}

double GaussianModel::covariance(const QuadratureForm& f1, const QuadratureForm& f2) const {
    require_registered(f1);
    require_registered(f2);
    // Both maps are ordered by id: merge-walk the common keys.
    double total = 0.0;
    auto i1 = f1.coefficients().begin();
    auto i2 = f2.coefficients().begin();
    while (i1 != f1.coefficients().end() && i2 != f2.coefficients().end()) {
        if (i1->first < i2->first) {
            ++i1;
        } else if (i2->first < i1->first) {
            ++i2;
        } else {
            total += i1->second * i2->second * sources_[i1->first.value].variance;
            ++i1;
            ++i2;
        }
    }
    return total;
}

double GaussianModel::variance(const QuadratureForm& form) const {
    require_registered(form);
    double total = 0.0;
    for (const auto& [id, c] : form.coefficients()) total += c * c * sources_[id.value].variance;
    return total;
}

Eigen::MatrixXd GaussianModel::covariance_matrix(std::span<const std::string> labels) const {
    std::vector<const QuadratureForm*> quads;
    quads.reserve(2 * labels.size());
    for (const auto& label : labels) {
        const ModeForms& m = mode(label);
        quads.push_back(&m.x);
        quads.push_back(&m.y);
    }
    const auto n = static_cast<Eigen::Index>(quads.size());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double c = covariance(*quads[i], *quads[j]);
            cov(i, j) = c;
            cov(j, i) = c;
        }
    }
    return cov;
}

}  // namespace cvswap::gaussian
