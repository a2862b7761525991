#include "osm/specfun.hpp"

#include "osm/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace osm::specfun {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kSeriesLimit = 8.0;
constexpr double kAsymptoticLimit = 25.0;

void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": non-finite argument");
    }
}

void require_nonnegative(double x, const char* fn) {
    require_finite(x, fn);
    if (x < 0.0) {
        throw DomainError(std::string(fn) + ": negative argument " + std::to_string(x));
    }
}

void require_positive(double x, const char* fn) {
    require_finite(x, fn);
    if (x <= 0.0) {
        throw DomainError(std::string(fn) + ": argument must be positive, got " +
                          std::to_string(x));
    }
}

// ---- small arguments: ascending power series ------------------------------

double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (double(m) * m);
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x;
    double sum = term;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (double(m) * (m + 1));
        sum += term;
        if (std::abs(term) < 1e-18) break;
    }
    return sum;
}

double y0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;  // (x^2/4)^m / (m!)^2 with alternating sign folded in below
    double harmonic = 0.0;
    double sum = 0.0;
    for (int m = 1; m < 60; ++m) {
        term *= -q / (double(m) * m);
        harmonic += 1.0 / m;
        const double contrib = -term * harmonic;  // (-1)^{m+1} H_m q^m/(m!)^2
        sum += contrib;
        if (std::abs(contrib) < 1e-18) break;
    }
    const double two_over_pi = 2.0 / std::numbers::pi;
    return two_over_pi * ((std::log(0.5 * x) + kEulerGamma) * j0_series(x) + sum);
}

double y1_series(double x) {
    const double q = 0.25 * x * x;
    // psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
    double term = 0.5 * x;  // (x/2)^{2k+1} (-1)^k / (k! (k+1)!)
    double h_k = 0.0;
    double h_k1 = 1.0;
    double sum = term * (-2.0 * kEulerGamma + h_k + h_k1);
    for (int k = 1; k < 60; ++k) {
        term *= -q / (double(k) * (k + 1));
        h_k += 1.0 / k;
        h_k1 += 1.0 / (k + 1);
        const double contrib = term * (-2.0 * kEulerGamma + h_k + h_k1);
        sum += contrib;
        if (std::abs(contrib) < 1e-18) break;
    }
    const double pi = std::numbers::pi;
    return (2.0 / pi) * std::log(0.5 * x) * j1_series(x) - 2.0 / (pi * x) - sum / pi;
}

// ---- intermediate arguments: Miller backward recurrence -------------------

struct MillerValues {
    double j0, j1, y0, y1;
};

MillerValues miller(double x) {
    // Start order well above x; the recurrence is stable downwards.
    int start = static_cast<int>(x) + 40;
    if (start % 2 != 0) ++start;

    std::array<double, 72> j{};  // unnormalized J_0 .. J_{start+1}
    j[start + 1] = 0.0;
    j[start] = 1e-30;
    for (int n = start; n >= 1; --n) {
        j[n - 1] = (2.0 * n / x) * j[n] - j[n + 1];
        if (std::abs(j[n - 1]) > 1e250) {
            for (int m = n - 1; m <= start; ++m) j[m] *= 1e-250;
        }
    }

    // J_0 + 2 sum_{k>=1} J_{2k} = 1
    double norm = j[0];
    double y0_sum = 0.0;  // sum (-1)^k J_{2k} / k
    double y1_sum = 0.0;  // sum (-1)^k (J_{2k-1} - J_{2k+1}) / k
    for (int k = 1; 2 * k <= start; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        norm += 2.0 * j[2 * k];
        y0_sum += sign * j[2 * k] / k;
        y1_sum += sign * (j[2 * k - 1] - j[2 * k + 1]) / k;
    }
    const double inv = 1.0 / norm;
    const double j0 = j[0] * inv;
    const double j1 = j[1] * inv;
    y0_sum *= inv;
    y1_sum *= inv;

    const double pi = std::numbers::pi;
    const double log_term = std::log(0.5 * x) + kEulerGamma;
    const double y0 = (2.0 / pi) * (log_term * j0 - 2.0 * y0_sum);
    const double y1 = -2.0 * j0 / (pi * x) + (2.0 / pi) * log_term * j1 + (2.0 / pi) * y1_sum;
    return {j0, j1, y0, y1};
}

// ---- large arguments: Hankel asymptotic expansion -------------------------

struct Asymptotic {
    double p, q;
};

Asymptotic hankel_pq(int order, double x) {
    const double mu = 4.0 * order * order;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;  // a_k(nu) / x^k
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double f = 2.0 * k - 1.0;
        a *= (mu - f * f) / (k * 8.0 * x);
        if (std::abs(a) > last) break;  // asymptotic series started to diverge
        last = std::abs(a);
        // k odd contributes to Q with sign (-1)^{(k-1)/2}; k even to P with (-1)^{k/2}
        switch (k % 4) {
            case 1: q += a; break;
            case 2: p -= a; break;
            case 3: q -= a; break;
            case 0: p += a; break;
        }
        if (last < 1e-17) break;
    }
    return {p, q};
}

struct Pair {
    double j, y;
};

Pair asymptotic(int order, double x) {
    const auto [p, q] = hankel_pq(order, x);
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double r2 = std::numbers::sqrt2 / 2.0;
    double cos_chi, sin_chi;
    if (order == 0) {  // chi = x - pi/4
        cos_chi = r2 * (c + s);
        sin_chi = r2 * (s - c);
    } else {  // chi = x - 3 pi / 4
        cos_chi = r2 * (s - c);
        sin_chi = -r2 * (s + c);
    }
    return {amp * (p * cos_chi - q * sin_chi), amp * (p * sin_chi + q * cos_chi)};
}

}  // namespace

double bessel_j0(double x) {
    require_nonnegative(x, "bessel_j0");
    if (x <= kSeriesLimit) return j0_series(x);
    if (x <= kAsymptoticLimit) return miller(x).j0;
    return asymptotic(0, x).j;
}

double bessel_j1(double x) {
    require_nonnegative(x, "bessel_j1");
    if (x <= kSeriesLimit) return j1_series(x);
    if (x <= kAsymptoticLimit) return miller(x).j1;
    return asymptotic(1, x).j;
}

double bessel_y0(double x) {
    require_positive(x, "bessel_y0");
    if (x <= kSeriesLimit) return y0_series(x);
    if (x <= kAsymptoticLimit) return miller(x).y0;
    return asymptotic(0, x).y;
}

double bessel_y1(double x) {
    require_positive(x, "bessel_y1");
    if (x <= kSeriesLimit) return y1_series(x);
    if (x <= kAsymptoticLimit) return miller(x).y1;
    return asymptotic(1, x).y;
}

std::complex<double> hankel1(int order, double x) {
    require_positive(x, "hankel1");
    if (order != 0 && order != 1) {
        throw DomainError("hankel1: only orders 0 and 1 are supported");
    }
    if (x <= kSeriesLimit) {
        return order == 0 ? std::complex<double>{j0_series(x), y0_series(x)}
                          : std::complex<double>{j1_series(x), y1_series(x)};
    }
    if (x <= kAsymptoticLimit) {
        const auto m = miller(x);
        return order == 0 ? std::complex<double>{m.j0, m.y0}
                          : std::complex<double>{m.j1, m.y1};
    }
    const auto a = asymptotic(order, x);
    return {a.j, a.y};
}

double spherical_j0(double x) {
    require_finite(x, "spherical_j0");
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double spherical_j0_derivative(double x) {
    require_finite(x, "spherical_j0_derivative");
    if (std::abs(x) < 0.05) {
        const double x2 = x * x;
        return x * (-1.0 / 3.0 + x2 * (1.0 / 30.0 + x2 * (-1.0 / 840.0 + x2 / 45360.0)));
    }
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}

}  // namespace osm::specfun
