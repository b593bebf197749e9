#include "tauber/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "tauber/errors.hpp"

namespace tauber::num {
namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1].
const double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
const double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
const double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class T>
void gk15(const std::function<T(double)>& f, double a, double b, T& k15, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T fc = f(c);
    T g7 = kWg[3] * fc;
    k15 = kWgk[7] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = h * kXgk[i];
        T fsum = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    g7 *= h;
    k15 *= h;
    double d = std::abs(k15 - g7);
    err = d * std::sqrt(d) * 200.0;  // standard QUADPACK-style inflation
    if (!(err < std::abs(k15))) err = std::max(err, d);
}

template <class T, class R>
R adapt(const std::function<T(double)>& f, double a, double b, double abs_tol,
        double rel_tol, int max_intervals) {
    struct Piece {
        double a, b, err;
        T val;
        bool operator<(const Piece& o) const { return err < o.err; }
    };
    std::priority_queue<Piece> heap;
    T v;
    double e;
    gk15(f, a, b, v, e);
    heap.push({a, b, e, v});
    T total = v;
    double err_total = e;
    int evals = 15, n = 1;
    for (;;) {
        double tol = std::max(abs_tol, rel_tol * std::abs(total));
        if (err_total <= tol || n >= max_intervals) {
            if (err_total > tol && err_total > 1e3 * std::max(abs_tol, 1e-300))
                throw NumericalFault("adaptive quadrature failed to converge");
            R r;
            r.value = total;
            r.abserr = err_total;
            r.evals = evals;
            return r;
        }
        Piece p = heap.top();
        heap.pop();
        double m = 0.5 * (p.a + p.b);
        T v1, v2;
        double e1, e2;
        gk15(f, p.a, m, v1, e1);
        gk15(f, m, p.b, v2, e2);
        evals += 30;
        total += v1 + v2 - p.val;
        err_total += e1 + e2 - p.err;
        heap.push({p.a, m, e1, v1});
        heap.push({m, p.b, e2, v2});
        ++n;
    }
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals) {
    if (a == b) return {};
    return adapt<double, QuadResult>(f, a, b, abs_tol, rel_tol, max_intervals);
}

QuadResultC integrate_c(const std::function<std::complex<double>(double)>& f, double a,
                        double b, double abs_tol, double rel_tol, int max_intervals) {
    if (a == b) return {};
    return adapt<std::complex<double>, QuadResultC>(f, a, b, abs_tol, rel_tol,
                                                    max_intervals);
}

QuadResult integrate_split(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breaks, double abs_tol) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    QuadResult total;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate(f, pts[i], pts[i + 1], abs_tol / pts.size());
        total.value += r.value;
        total.abserr += r.abserr;
        total.evals += r.evals;
    }
    return total;
}

QuadResult integrate_endpoint_power(const std::function<double(double)>& f, double a,
                                    double b, double sing_exp, double abs_tol) {
    if (sing_exp <= -1.0)
        throw NormDiverges("endpoint exponent <= -1: integral diverges");
    if (sing_exp >= 0.0) return integrate(f, a, b, abs_tol);
    const double p = 1.0 / (1.0 + sing_exp);
    const double ub = std::pow(b - a, 1.0 / p);
    auto g = [&](double u) {
        double t = a + std::pow(u, p);
        return f(t) * p * std::pow(u, p - 1.0);
    };
    return integrate(g, 0.0, ub, abs_tol);
}

} // namespace tauber::num
