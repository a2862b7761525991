#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace osm::detail {

using cvec = std::vector<std::complex<double>>;

struct GmresResult {
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;  // relative residual per iteration, entry 0 initial
};

inline double norm2(const cvec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

/// Restarted GMRES for A x = b. `apply(in, out)` computes out = A in. `x`
/// holds the initial guess on entry and the solution on exit.
template <class Apply>
GmresResult gmres(Apply&& apply, const cvec& b, cvec& x, double tolerance, int restart,
                  int max_iterations) {
    using cplx = std::complex<double>;
    const std::size_t n = b.size();
    GmresResult result;

    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), cplx{});
        result.converged = true;
        result.residual_history.push_back(0.0);
        return result;
    }

    cvec r(n), w(n);
    auto residual = [&] {
        apply(x, w);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - w[i];
        return norm2(r);
    };

    double beta = residual();
    result.residual_history.push_back(beta / bnorm);
    if (beta / bnorm <= tolerance) {
        result.converged = true;
        return result;
    }

    const int m = restart;
    std::vector<cvec> basis(static_cast<std::size_t>(m) + 1, cvec(n));
    std::vector<cplx> hess(static_cast<std::size_t>(m + 1) * m);
    auto H = [&](int i, int j) -> cplx& { return hess[static_cast<std::size_t>(j) * (m + 1) + i]; };
    std::vector<double> cs(m);
    std::vector<cplx> sn(m);
    std::vector<cplx> g(static_cast<std::size_t>(m) + 1);

    while (result.iterations < max_iterations) {
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), cplx{});
        g[0] = beta;

        int j = 0;
        bool inner_done = false;
        for (; j < m && !inner_done; ++j) {
            apply(basis[j], w);
            // modified Gram-Schmidt
            for (int i = 0; i <= j; ++i) {
                cplx h{};
                for (std::size_t q = 0; q < n; ++q) h += std::conj(basis[i][q]) * w[q];
                H(i, j) = h;
                for (std::size_t q = 0; q < n; ++q) w[q] -= h * basis[i][q];
            }
            const double hnext = norm2(w);
            H(j + 1, j) = hnext;
            if (hnext > 0.0) {
                for (std::size_t q = 0; q < n; ++q) basis[j + 1][q] = w[q] / hnext;
            }
            for (int i = 0; i < j; ++i) {
                const cplx a = H(i, j);
                const cplx c = H(i + 1, j);
                H(i, j) = cs[i] * a + sn[i] * c;
                H(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * c;
            }
            const cplx a = H(j, j);
            const cplx c = H(j + 1, j);
            const double denom = std::sqrt(std::norm(a) + std::norm(c));
            if (std::abs(a) == 0.0) {
                cs[j] = 0.0;
                sn[j] = std::conj(c) / std::abs(c);
            } else {
                cs[j] = std::abs(a) / denom;
                sn[j] = (a / std::abs(a)) * std::conj(c) / denom;
            }
            H(j, j) = cs[j] * a + sn[j] * c;
            H(j + 1, j) = 0.0;
            g[j + 1] = -std::conj(sn[j]) * g[j];
            g[j] = cs[j] * g[j];

            ++result.iterations;
            const double rel = std::abs(g[j + 1]) / bnorm;
            result.residual_history.push_back(rel);
            if (rel <= tolerance || result.iterations >= max_iterations || hnext == 0.0) {
                inner_done = true;
            }
        }

        // back substitution on the j x j triangle
        std::vector<cplx> y(static_cast<std::size_t>(j));
        for (int i = j - 1; i >= 0; --i) {
            cplx s = g[i];
            for (int l = i + 1; l < j; ++l) s -= H(i, l) * y[l];
            y[i] = s / H(i, i);
        }
        for (int i = 0; i < j; ++i) {
            for (std::size_t q = 0; q < n; ++q) x[q] += y[i] * basis[i][q];
        }

        beta = residual();
        if (beta / bnorm <= tolerance) {
            result.converged = true;
            result.residual_history.back() = beta / bnorm;
            return result;
        }
    }
    return result;
}

}  // namespace osm::detail
