#ifndef TAUBER_UTIL_HPP
#define TAUBER_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace tauber {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

// log(e^a + e^b), safe for very negative arguments.
inline double logsumexp(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

inline std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = lo; return v; }
    double r = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo * std::exp(r * i);
    v.back() = hi;
    return v;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) { v[0] = lo; return v; }
    double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) v[i] = lo + h * i;
    v.back() = hi;
    return v;
}

// 6-point centered Lagrange interpolation on a uniform grid.
// x0 is the coordinate of v[0], h the spacing. Returns 0 outside the table.
double interp6(const std::vector<double>& v, double x0, double h, double x);

// Ordinary least squares: solves min ||A c - y||_2 for small column counts.
// Returns coefficients; residual RMS stored in *rms if non-null.
std::vector<double> lsq_fit(const std::vector<std::vector<double>>& cols,
                            const std::vector<double>& y, double* rms = nullptr);

// FNV-1a 64-bit, used for config hashes in provenance sidecars.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace tauber

#endif
