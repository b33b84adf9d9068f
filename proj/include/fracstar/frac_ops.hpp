#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fracstar {

/// coef * x^expo on x > 0. Fractional integrability at 0 requires expo > -1.
struct Monomial {
    double coef = 0.0;
    double expo = 0.0;

    double operator()(double x) const { return coef * std::pow(x, expo); }
    bool operator==(const Monomial&) const = default;
};

/// Left-sided Riemann-Liouville integral of a monomial:
/// (I^q t^p)(x) = [Gamma(p+1)/Gamma(p+1+q)] x^{p+q}. Requires q > 0, expo > -1.
Monomial power_integral(double q, const Monomial& mono);

/// Left-sided Riemann-Liouville derivative of a monomial:
/// (D^q t^p)(x) = [Gamma(p+1)/Gamma(p+1-q)] x^{p-q}. Requires q > 0, expo > -1.
/// The coefficient is exactly 0 when p+1-q is a nonpositive integer (kernel of D^q).
Monomial power_derivative(double q, const Monomial& mono);

/// Grunwald-Letnikov weights w_0..w_n: w_0 = 1, w_k = w_{k-1} (1 - (q+1)/k),
/// i.e. (-1)^k binomial(q, k).
std::vector<double> gl_weights(double q, std::size_t n);

/// Grunwald-Letnikov approximation of (D^q f)(x) from the left endpoint 0:
/// step^{-q} sum_{k=0}^{floor(x/step)} w_k f(x - k step).
/// Requires q in (0,2), step > 0 and x/step >= 8.
double rl_derivative_numeric(const std::function<double(double)>& f, double q, double x,
                             double step);

/// Sample count and grading exponent of a verification mesh; nodes x_k = L (k/n)^grading.
struct GridSpec {
    int n = 4096;
    double grading = 2.0;

    bool operator==(const GridSpec&) const = default;
};

/// Immutable graded mesh on [0, L]. Construction enforces n >= 8 and grading >= 1.
class GradedGrid {
  public:
    GradedGrid(const GridSpec& spec, double length);

    std::span<const double> nodes() const { return nodes_; }
    double node(std::size_t k) const { return nodes_[k]; }
    std::size_t size() const { return nodes_.size(); }  // n + 1
    double length() const { return length_; }
    const GridSpec& spec() const { return spec_; }

    /// Index of the node equal to x; throws DomainError when x is not a node.
    std::size_t index_of(double x) const;

    std::vector<double> sample(const std::function<double(double)>& f) const;

  private:
    GridSpec spec_;
    double length_;
    std::vector<double> nodes_;
};

/// Product-trapezoidal quadrature of the weakly singular convolution
/// (I^q f)(x) = Gamma(q)^{-1} int_0^x (x-t)^{q-1} f(t) dt,
/// exact for piecewise-linear f. samples must hold f at every grid node and
/// x must be a grid node.
double rl_integral_numeric(std::span<const double> samples, const GradedGrid& grid, double q,
                           double x);

}  // namespace fracstar
