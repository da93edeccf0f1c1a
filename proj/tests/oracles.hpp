#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

// Independent reference computations for the test suites: closed forms,
// series evaluation and bisection only, no lattice and no library calls.
namespace oracle {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if (flo * f(hi) > 0.0) {
        throw std::runtime_error("oracle::bisect: no sign change on the bracket");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Frequencies of -psi'' on (0,1) with psi'(0) = k psi(0), psi'(1) = -k psi(1):
// roots of tan(w) = 2 k w / (w^2 - k^2), evaluated in the pole-free form
// sin(w) (w^2 - k^2) - 2 k w cos(w) = 0. For k > 0 the n-th frequency lies
// in ((n-1) pi, n pi); the energy is w^2 at mass 1/2.
inline double robin_omega(double k, int n) {
    if (!(k > 0.0) || n < 1) {
        throw std::runtime_error("oracle::robin_omega: expects k > 0, n >= 1");
    }
    const double pi = std::numbers::pi;
    const auto f = [k](double w) {
        return std::sin(w) * (w * w - k * k) - 2.0 * k * w * std::cos(w);
    };
    if (n > 1) {
        return bisect(f, (n - 1) * pi + 1e-12, n * pi - 1e-12);
    }
    // scan for the first sign change; for large k the root hugs pi where
    // f(pi) = 2 k pi > 0
    double lo = 1e-9;
    double prev = f(lo);
    for (double w = 1e-4; w < pi; w += 1e-4) {
        const double cur = f(w);
        if (prev * cur <= 0.0) {
            return bisect(f, w - 1e-4, w);
        }
        prev = cur;
        lo = w;
    }
    return bisect(f, lo, pi);
}

// Bessel J_m by its ascending series; adequate for x <= 20.
inline double bessel_j(int m, double x) {
    const double half = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= m; ++i) {
        term *= half / static_cast<double>(i);
    }
    double sum = term;
    for (int j = 1; j < 80; ++j) {
        term *= -half * half / (static_cast<double>(j) * static_cast<double>(j + m));
        sum += term;
        if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
}

// First positive zero of J_m, from a coarse scan plus bisection.
inline double bessel_j_first_zero(int m) {
    const auto f = [m](double x) { return bessel_j(m, x); };
    double prev = f(1e-6);
    for (double x = 0.1; x < 25.0; x += 0.1) {
        const double cur = f(x);
        if (prev * cur <= 0.0) {
            return bisect(f, x - 0.1, x);
        }
        prev = cur;
    }
    throw std::runtime_error("oracle::bessel_j_first_zero: no zero found below 25");
}

}  // namespace oracle
