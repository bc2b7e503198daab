#pragma once

// Gaussian optical modes as linear forms over independent Gaussian sources.
//
// Every quadrature of every live mode is a QuadratureForm: a real linear
// combination of independent zero-mean Gaussian source variables plus a
// classical offset. Linear optics (two-mode squeezing, beamsplitters, loss,
// feedforward displacement) only rewrites these forms, so variances and
// covariances of any quadrature combination stay exact, including the
// correlations carried by measured photocurrents.
//
// Units: vacuum quadrature variance = 1 (shot-noise-limit normalization).

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace cvswap::gaussian {

struct SourceId {
    std::uint32_t value = 0;
    friend auto operator<=>(SourceId, SourceId) = default;
};

struct SourceVariable {
    SourceId id;
    double variance = 1.0;
    std::string tag;  // provenance, e.g. "epr(a,b).x+" or "vac(loss:b)#3.x"
};

class QuadratureForm {
public:
    QuadratureForm() = default;

    static QuadratureForm single(SourceId id, double coefficient = 1.0);
    static QuadratureForm constant(double offset);

    double coefficient(SourceId id) const;
    const std::map<SourceId, double>& coefficients() const noexcept { return coefficients_; }
    double classical_offset() const noexcept { return offset_; }
    bool empty() const noexcept { return coefficients_.empty(); }

    QuadratureForm& operator+=(const QuadratureForm& other);
    QuadratureForm& operator-=(const QuadratureForm& other);
    QuadratureForm& operator*=(double scale);

    friend QuadratureForm operator+(QuadratureForm lhs, const QuadratureForm& rhs) { return lhs += rhs; }
    friend QuadratureForm operator-(QuadratureForm lhs, const QuadratureForm& rhs) { return lhs -= rhs; }
    friend QuadratureForm operator*(QuadratureForm form, double scale) { return form *= scale; }
    friend QuadratureForm operator*(double scale, QuadratureForm form) { return form *= scale; }
    friend QuadratureForm operator-(QuadratureForm form) { return form *= -1.0; }

private:
    void add_term(SourceId id, double coefficient);

    std::map<SourceId, double> coefficients_;
    double offset_ = 0.0;
};

struct ModeForms {
    QuadratureForm x;  // amplitude quadrature
    QuadratureForm y;  // phase quadrature
};

/// Immutable-by-convention state container. Every transformation is a const
/// member returning an updated copy, so a model can be shared read-only
/// across threads.
class GaussianModel {
public:
    GaussianModel() = default;

    [[nodiscard]] GaussianModel add_vacuum_mode(std::string_view label) const;

    /// Two-mode squeezed (EPR) pair with squeezed X-sum and Y-difference:
    /// Var(X_a+X_b)/2 = Var(Y_a-Y_b)/2 = e^{-2r}, orthogonal combinations e^{+2r}.
    [[nodiscard]] GaussianModel add_epr_pair(std::string_view label_a, std::string_view label_b,
                                             double r) const;

    /// x1' = t x1 + sqrt(1-t^2) x2,  x2' = -sqrt(1-t^2) x1 + t x2 (same for y).
    [[nodiscard]] GaussianModel beamsplitter(std::string_view label_1, std::string_view label_2,
                                             double transmittance_amplitude) const;

    /// Amplitude transmission xi with a fresh vacuum ancilla in the lost port.
    [[nodiscard]] GaussianModel loss(std::string_view label, double xi) const;

    /// x' = x + gain * x_add, y' = y + gain * y_add.
    [[nodiscard]] GaussianModel displace_by_form(std::string_view label, const QuadratureForm& x_add,
                                                 const QuadratureForm& y_add, double gain) const;

    /// Drops a mode (e.g. after it has been measured); its sources stay registered.
    [[nodiscard]] GaussianModel remove_mode(std::string_view label) const;

    double variance(const QuadratureForm& form) const;
    double covariance(const QuadratureForm& f1, const QuadratureForm& f2) const;

    /// 2n x 2n matrix in (x1, y1, x2, y2, ...) ordering.
    Eigen::MatrixXd covariance_matrix(std::span<const std::string> labels) const;

    bool has_mode(std::string_view label) const;
    const ModeForms& mode(std::string_view label) const;
    const QuadratureForm& x(std::string_view label) const { return mode(label).x; }
    const QuadratureForm& y(std::string_view label) const { return mode(label).y; }

    const std::vector<SourceVariable>& sources() const noexcept { return sources_; }
    std::vector<std::string> mode_labels() const;

private:
    SourceId register_source(double variance, std::string tag);
    ModeForms& mode_mut(std::string_view label);
    void require_registered(const QuadratureForm& form) const;
    void require_unused(std::string_view label) const;

    std::vector<SourceVariable> sources_;  // SourceId::value indexes this vector
    std::map<std::string, ModeForms, std::less<>> modes_;
    std::uint32_t vacuum_counter_ = 0;
};

}  // namespace cvswap::gaussian
