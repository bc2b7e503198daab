#include "cvswap/rng.hpp"

#include <cmath>
#include <numbers>

namespace cvswap::rng {

double NormalSource::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

void NormalSource::fill(std::span<double> out) noexcept {
    for (double& v : out) v = normal();
}

}  // namespace cvswap::rng
