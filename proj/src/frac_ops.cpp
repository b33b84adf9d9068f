#include "fracstar/frac_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracstar/errors.hpp"
#include "fracstar/specfun.hpp"

namespace fracstar {
namespace {

void require_integrable(const Monomial& mono, const char* op) {
    if (!(mono.expo > -1.0)) {
        std::ostringstream msg;
        msg << op << ": exponent " << mono.expo << " <= -1 is not fractionally integrable at 0";
        throw DomainError(msg.str());
    }
}

void require_positive_order(double q, const char* op) {
    if (!(q > 0.0)) {
        std::ostringstream msg;
        msg << op << ": order q = " << q << " must be positive";
        throw DomainError(msg.str());
    }
}

}  // namespace

Monomial power_integral(double q, const Monomial& mono) {
    require_positive_order(q, "power_integral");
    require_integrable(mono, "power_integral");
    const double p = mono.expo;
    return {mono.coef * gamma_ratio(p + 1.0, p + 1.0 + q), p + q};
}

Monomial power_derivative(double q, const Monomial& mono) {
    require_positive_order(q, "power_derivative");
    require_integrable(mono, "power_derivative");
    const double p = mono.expo;
    // gamma_ratio is exactly 0 when p+1-q hits a pole: D^q annihilates x^{q-1}, x^{q-2}, ...
    return {mono.coef * gamma_ratio(p + 1.0, p + 1.0 - q), p - q};
}

std::vector<double> gl_weights(double q, std::size_t n) {
    std::vector<double> w(n + 1);
    w[0] = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
        w[k] = w[k - 1] * (1.0 - (q + 1.0) / static_cast<double>(k));
    return w;
}

double rl_derivative_numeric(const std::function<double(double)>& f, double q, double x,
                             double step) {
    if (!(q > 0.0) || !(q < 2.0)) {
        std::ostringstream msg;
        msg << "rl_derivative_numeric: order q = " << q << " outside (0,2)";
        throw DomainError(msg.str());
    }
    if (!(step > 0.0) || !(x > 0.0))
        throw DomainError("rl_derivative_numeric: x and step must be positive");

    const double ratio = x / step;
    const double rounded = std::round(ratio);
    const std::size_t n = (std::fabs(ratio - rounded) < 1e-9 * std::max(1.0, ratio))
                              ? static_cast<std::size_t>(rounded)
                              : static_cast<std::size_t>(std::floor(ratio));
    if (n < 8) {
        std::ostringstream msg;
        msg << "rl_derivative_numeric: only " << n << " nodes on [0," << x << "], need >= 8";
        throw DomainError(msg.str());
    }

    const std::vector<double> w = gl_weights(q, n);
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        double t = x - static_cast<double>(k) * step;
        if (t < 0.0) t = 0.0;  // last node, roundoff only
        acc += w[k] * f(t);
    }
    return acc / std::pow(step, q);
}

GradedGrid::GradedGrid(const GridSpec& spec, double length) : spec_(spec), length_(length) {
    if (spec.n < 8) throw DomainError("GradedGrid: need n >= 8");
    if (!(spec.grading >= 1.0)) throw DomainError("GradedGrid: need grading >= 1");
    if (!(length > 0.0)) throw DomainError("GradedGrid: need length > 0");
    nodes_.resize(static_cast<std::size_t>(spec.n) + 1);
    for (std::size_t k = 0; k < nodes_.size(); ++k)
        nodes_[k] =
            length * std::pow(static_cast<double>(k) / static_cast<double>(spec.n), spec.grading);
    nodes_.front() = 0.0;
    nodes_.back() = length;
}

std::size_t GradedGrid::index_of(double x) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
    std::size_t best = static_cast<std::size_t>(it - nodes_.begin());
    if (best == nodes_.size() || (best > 0 && x - nodes_[best - 1] < nodes_[best] - x)) --best;
    if (std::fabs(nodes_[best] - x) <= 1e-12 * std::max(1.0, length_)) return best;
    std::ostringstream msg;
    msg << "GradedGrid: x = " << x << " is not a grid node (nearest: " << nodes_[best] << ")";
    throw DomainError(msg.str());
}

std::vector<double> GradedGrid::sample(const std::function<double(double)>& f) const {
    std::vector<double> values(nodes_.size());
    for (std::size_t k = 0; k < nodes_.size(); ++k) values[k] = f(nodes_[k]);
    return values;
}

double rl_integral_numeric(std::span<const double> samples, const GradedGrid& grid, double q,
                           double x) {
    require_positive_order(q, "rl_integral_numeric");
    if (samples.size() != grid.size())
        throw DomainError("rl_integral_numeric: samples do not match the grid");
    const std::size_t j = grid.index_of(x);
    const double target = grid.node(j);

    // On each panel [a,b] interpolate f linearly and integrate the kernel moments
    //   M0 = int_a^b (X-t)^{q-1} dt,  M1 = int_a^b (X-t)^{q-1} (t-a) dt
    // in closed form (A = X-a, B = X-b):
    //   M0 = (A^q - B^q)/q,  M1 = A (A^q - B^q)/q - (A^{q+1} - B^{q+1})/(q+1).
    double acc = 0.0;
    for (std::size_t k = 0; k < j; ++k) {
        const double a = grid.node(k);
        const double b = grid.node(k + 1);
        const double big = target - a;
        const double small = target - b;
        const double pa = std::pow(big, q), pb = std::pow(small, q);
        const double m0 = (pa - pb) / q;
        const double m1 = big * m0 - (pa * big - pb * small) / (q + 1.0);
        const double fa = samples[k], fb = samples[k + 1];
        acc += fa * m0 + (fb - fa) / (b - a) * m1;
    }
    return acc / gamma(q);
}

}  // namespace fracstar
