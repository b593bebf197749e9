#include "tauber/util.hpp"

#include <cassert>
#include <stdexcept>

namespace tauber {

double interp6(const std::vector<double>& v, double x0, double h, double x) {
    const long n = (long)v.size();
    double u = (x - x0) / h;
    long i = (long)std::floor(u);
    if (i < -1 || i > n) return 0.0;
    // 6 points centered on the containing interval [i, i+1]
    long base = i - 2;
    if (base < 0) base = 0;
    if (base > n - 6) base = n - 6;
    if (base < 0) return 0.0;  // table too small
    double s = u - base;
    double out = 0.0;
    for (int k = 0; k < 6; ++k) {
        double w = 1.0;
        for (int j = 0; j < 6; ++j)
            if (j != k) w *= (s - j) / (double)(k - j);
        out += w * v[base + k];
    }
    return out;
}

std::vector<double> lsq_fit(const std::vector<std::vector<double>>& cols,
                            const std::vector<double>& y, double* rms) {
    const size_t p = cols.size(), n = y.size();
    if (p == 0 || n == 0) throw std::invalid_argument("lsq_fit: empty system");
    for (auto& c : cols)
        if (c.size() != n) throw std::invalid_argument("lsq_fit: ragged columns");
    // normal equations with Gaussian elimination; p is tiny here
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (size_t i = 0; i < p; ++i) {
        for (size_t j = 0; j < p; ++j)
            for (size_t k = 0; k < n; ++k) a[i][j] += cols[i][k] * cols[j][k];
        for (size_t k = 0; k < n; ++k) a[i][p] += cols[i][k] * y[k];
    }
    for (size_t i = 0; i < p; ++i) {
        size_t piv = i;
        for (size_t r = i + 1; r < p; ++r)
            if (std::abs(a[r][i]) > std::abs(a[piv][i])) piv = r;
        std::swap(a[i], a[piv]);
        if (std::abs(a[i][i]) < 1e-300) throw std::runtime_error("lsq_fit: singular system");
        for (size_t r = 0; r < p; ++r) {
            if (r == i) continue;
            double f = a[r][i] / a[i][i];
            for (size_t cidx = i; cidx <= p; ++cidx) a[r][cidx] -= f * a[i][cidx];
        }
    }
    std::vector<double> c(p);
    for (size_t i = 0; i < p; ++i) c[i] = a[i][p] / a[i][i];
    if (rms) {
        double ss = 0.0;
        for (size_t k = 0; k < n; ++k) {
            double pred = 0.0;
            for (size_t i = 0; i < p; ++i) pred += c[i] * cols[i][k];
            ss += (y[k] - pred) * (y[k] - pred);
        }
        *rms = std::sqrt(ss / n);
    }
    return c;
}

} // namespace tauber
