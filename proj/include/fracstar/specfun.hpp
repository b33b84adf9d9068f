#pragma once

namespace fracstar {

/// Natural log of |Gamma(x)| together with the sign of Gamma(x).
/// sign is +1 for all x > 0; exp(log_abs) * sign equals Gamma(x) wherever it is finite.
struct SignedLogGamma {
    double log_abs;
    int sign;  // +1 or -1
};

/// Absolute tolerance around the poles 0, -1, -2, ...
inline constexpr double kGammaPoleTol = 1e-12;

/// True when x lies within kGammaPoleTol of a nonpositive integer.
bool is_gamma_pole(double x);

/// Signed log-Gamma; throws PoleError at poles.
SignedLogGamma signed_log_gamma(double x);

/// Gamma(x) for real x, correct sign for negative non-integer arguments.
/// Relative error <= 1e-12 for |x| <= 50. Throws PoleError at poles.
double gamma(double x);

/// Gamma(a)/Gamma(b) via signed log-Gamma differencing.
/// When only b is a pole the ratio is exactly 0 (reciprocal-Gamma convention);
/// a pole in a throws PoleError.
double gamma_ratio(double a, double b);

}  // namespace fracstar
