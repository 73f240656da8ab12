#pragma once

#include <functional>

namespace gmol {

/// Adaptive Gauss-Kronrod integral of f over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

/// ∫_0^∞ f(x) dx for integrands with at most algebraic tail decay.
///
/// The range is split at `scale`; the tail [scale, ∞) is mapped onto (0,1] by
/// x = scale/w and integrated with tanh-sinh, which tolerates the endpoint
/// singularity produced by slowly decaying densities. Non-finite evaluations at
/// extreme abscissae are treated as zero.
double integrate_half_line(const std::function<double(double)>& f, double scale,
                           double rel_tol = 1e-12);

}  // namespace gmol
