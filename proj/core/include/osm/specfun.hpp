#pragma once

#include <complex>

// Cylinder and spherical Bessel functions of integer order 0 and 1 for real
// arguments. Absolute accuracy is better than 1e-10 on [0, 1e4].
namespace osm::specfun {

double bessel_j0(double x);
double bessel_j1(double x);
double bessel_y0(double x);
double bessel_y1(double x);

/// H^(1)_order(x) = J_order(x) + i Y_order(x) for order 0 or 1 and x > 0.
std::complex<double> hankel1(int order, double x);

/// sin(x)/x, with j0(0) = 1.
double spherical_j0(double x);

/// d/dx j0(x) = (x cos x - sin x) / x^2, with value 0 at the origin.
double spherical_j0_derivative(double x);

}  // namespace osm::specfun
