#ifndef TAUBER_QUADRATURE_HPP
#define TAUBER_QUADRATURE_HPP

#include <complex>
#include <functional>
#include <vector>

namespace tauber::num {

struct QuadResult {
    double value = 0.0;
    double abserr = 0.0;   // accumulated error estimate
    int evals = 0;
};

struct QuadResultC {
    std::complex<double> value{0.0, 0.0};
    double abserr = 0.0;
    int evals = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol = 1e-12, int max_intervals = 4000);

QuadResultC integrate_c(const std::function<std::complex<double>(double)>& f,
                        double a, double b, double abs_tol, double rel_tol = 1e-12,
                        int max_intervals = 4000);

// Splits at the given interior breakpoints, then integrates each piece adaptively.
QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breaks, double abs_tol);

// \int_a^b g(t) dt where g has an algebraic singularity g ~ (t-a)^{sing_exp} at a,
// sing_exp > -1. Substitutes t = a + u^{1/(1+sing_exp)} to remove it.
QuadResult integrate_endpoint_power(const std::function<double(double)>& f, double a,
                                    double b, double sing_exp, double abs_tol);

} // namespace tauber::num

#endif
