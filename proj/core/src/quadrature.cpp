#include "gmol/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gmol/error.hpp"

namespace gmol {
namespace {

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b >= a)) throw DomainError("integrate: empty or reversed interval");
  if (a == b) return 0.0;
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double x) { return finite_or_zero(f(x)); }, a, b, 15, rel_tol, &error);
}

double integrate_half_line(const std::function<double(double)>& f, double scale, double rel_tol) {
  if (!(scale > 0.0)) throw DomainError("integrate_half_line: scale must be positive");
  const double head = integrate(f, 0.0, scale, rel_tol);
  boost::math::quadrature::tanh_sinh<double> tail_rule;
  const double tail = tail_rule.integrate(
      [&](double w) {
        if (w <= 0.0) return 0.0;
        const double x = scale / w;
        return finite_or_zero(f(x) * scale / (w * w));
      },
      0.0, 1.0, rel_tol);
  return head + tail;
}

}  // namespace gmol
