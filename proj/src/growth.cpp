#include "tauber/growth.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <nlohmann/json.hpp>

#include "tauber/errors.hpp"
#include "tauber/util.hpp"

namespace tauber::growth {

GrowthSequence::GrowthSequence(std::function<double(long)> log_rule, long max_index,
                               std::string name)
    : rule_(std::move(log_rule)),
      max_index_(max_index),
      name_(std::move(name)),
      mutex_(std::make_shared<std::mutex>()) {}

GrowthSequence GrowthSequence::power_nn() {
    return GrowthSequence([](long n) { return n == 0 ? 0.0 : n * std::log((double)n); },
                          1 << 21, "n^n");
}

GrowthSequence GrowthSequence::gevrey(double alpha) {
    if (alpha <= 0.0) throw SchemaError("gevrey requires alpha > 0");
    return GrowthSequence([alpha](long n) { return std::lgamma((double)n + 1.0) / alpha; },
                          1 << 22, "gevrey(" + std::to_string(alpha) + ")");
}

GrowthSequence GrowthSequence::pow_alpha_nn(double ap) {
    return GrowthSequence(
        [ap](long n) { return n == 0 ? 0.0 : ap * n * std::log((double)n); }, 1 << 21,
        "n^(" + std::to_string(ap) + "n)");
}

GrowthSequence GrowthSequence::n_log_n() {
    return GrowthSequence(
        [](long n) {
            return n == 0 ? 0.0 : n * std::log((double)n * std::log((double)n + 1.0));
        },
        1 << 21, "(n log(n+1))^n");
}

GrowthSequence GrowthSequence::ones() {
    return GrowthSequence([](long) { return 0.0; }, 1 << 21, "ones");
}

GrowthSequence GrowthSequence::from_table(const std::vector<double>& logM) {
    auto data = std::make_shared<std::vector<double>>(logM);
    return GrowthSequence(
        [data](long n) {
            if (n >= (long)data->size())
                throw OutOfRange("table sequence index beyond tabulation");
            return (*data)[n];
        },
        (long)logM.size() - 1, "table");
}

double GrowthSequence::logM(long n) const {
    if (n < 0) throw OutOfRange("sequence index negative");
    if (n > max_index_) throw OutOfRange("sequence index beyond max_index");
    std::lock_guard<std::mutex> lock(*mutex_);
    if (n >= (long)cache_.size()) {
        long old = (long)cache_.size();
        long grow = std::max<long>(n + 1, std::max<long>(64, old * 2));
        grow = std::min(grow, max_index_ + 1);
        cache_.resize(grow);
        for (long k = old; k < grow; ++k) cache_[k] = rule_(k);
    }
    return cache_[n];
}

long GrowthSequence::tabulated() const {
    std::lock_guard<std::mutex> lock(*mutex_);
    return (long)cache_.size();
}

double GrowthSequence::subanalytic_witness(double L, long upto) const {
    double logL = std::log(L);
    double best = kInf;
    for (long n = 0; n <= upto; ++n) {
        double lognn = n == 0 ? 0.0 : n * std::log((double)n);
        best = std::min(best, logM(n) - n * logL - lognn);
    }
    return std::exp(best);
}

GrowthSequence parse_sequence(const nlohmann::json& rule) {
    if (!rule.is_object() || !rule.contains("kind"))
        throw SchemaError("sequence rule must be an object with a \"kind\" field");
    std::string kind = rule.at("kind").get<std::string>();
    if (kind == "nn") return GrowthSequence::power_nn();
    if (kind == "gevrey") return GrowthSequence::gevrey(rule.at("alpha").get<double>());
    if (kind == "pow_alpha_nn" || kind == "napn")
        return GrowthSequence::pow_alpha_nn(rule.at("alpha").get<double>());
    if (kind == "nlogn") return GrowthSequence::n_log_n();
    if (kind == "ones") return GrowthSequence::ones();
    if (kind == "table") {
        if (rule.contains("logM"))
            return GrowthSequence::from_table(rule.at("logM").get<std::vector<double>>());
        if (rule.contains("M")) {
            auto vals = rule.at("M").get<std::vector<double>>();
            std::vector<double> lm(vals.size());
            for (size_t i = 0; i < vals.size(); ++i) {
                if (vals[i] <= 0.0) throw SchemaError("table sequence entries must be > 0");
                lm[i] = std::log(vals[i]);
            }
            return GrowthSequence::from_table(lm);
        }
        throw SchemaError("table sequence needs \"logM\" or \"M\"");
    }
    throw SchemaError("unknown sequence kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

double associated_function(const GrowthSequence& seq, double x) {
    if (x <= 0.0) throw OutOfRange("associated function requires x > 0");
    const double lx = std::log(x);
    double sup = -seq.logM(0);
    long argmax = 0;
    // Log-convex sequences make n*lx - logM(n) concave in n; a plain running
    // scan with the e^{-20} drop rule is robust for the general case too.
    for (long n = 1; n <= seq.max_index(); ++n) {
        double term = n * lx - seq.logM(n);
        if (term > sup) {
            sup = term;
            argmax = n;
        } else if (term < sup - 20.0 && n > 2 * argmax + 16) {
            return sup;
        }
    }
    throw NonConvergent("associated function did not stabilize by max_index (x = " +
                        std::to_string(x) + ", sequence " + seq.name() + ")");
}

bool check_log_convex(const GrowthSequence& seq, long upto) {
    for (long n = 1; n < upto; ++n) {
        double lhs = 2.0 * seq.logM(n);
        double rhs = seq.logM(n - 1) + seq.logM(n + 1);
        double slack = 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
        if (lhs > rhs + slack) return false;
    }
    return true;
}

TriState check_non_quasianalytic(const GrowthSequence& seq, double tail_tol, long upto) {
    const long N = upto > 0 ? std::min(upto, seq.max_index()) : std::min<long>(200000, seq.max_index());
    // partial sum of r_n = M_n/M_{n+1} and a power-law fit of r_n over the
    // last quarter: r_n ~ A n^{-beta}.
    double partial = 0.0;
    std::vector<double> log_n, log_r;
    const long fit_from = (3 * N) / 4;
    for (long n = 0; n < N; ++n) {
        double lr = seq.logM(n) - seq.logM(n + 1);
        partial += std::exp(lr);
        if (n >= fit_from && n > 0) {
            log_n.push_back(std::log((double)n));
            log_r.push_back(lr);
        }
    }
    const double div_threshold = std::log((double)N) + 10.0;
    if (partial > div_threshold) return TriState::False;
    if (log_n.size() < 8) return TriState::Inconclusive;
    double rms = 0.0;
    auto c = lsq_fit({std::vector<double>(log_n.size(), 1.0), log_n}, log_r, &rms);
    double beta = -c[1];
    if (beta >= 1.25) {
        // tail ~ A N^{1-beta}/(beta-1)
        double logA = c[0];
        double tail = std::exp(logA + (1.0 - beta) * std::log((double)N)) / (beta - 1.0);
        if (tail < tail_tol) return TriState::True;
        return TriState::Inconclusive;
    }
    if (beta < 1.10) return TriState::False;
    return TriState::Inconclusive;
}

GrowthSequence log_convex_minorant(const GrowthSequence& seq, long upto) {
    // Lower convex hull of (n, log M_n) by monotone chain.
    std::vector<double> lm(upto + 1);
    for (long n = 0; n <= upto; ++n) lm[n] = seq.logM(n);
    std::vector<long> hull;
    for (long n = 0; n <= upto; ++n) {
        while (hull.size() >= 2) {
            long a = hull[hull.size() - 2], b = hull[hull.size() - 1];
            // keep b only if it lies strictly below chord a..n
            double chord = lm[a] + (lm[n] - lm[a]) * (double)(b - a) / (double)(n - a);
            if (lm[b] <= chord) break;
            hull.pop_back();
        }
        hull.push_back(n);
    }
    std::vector<double> out(upto + 1);
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long a = hull[i], b = hull[i + 1];
        for (long n = a; n <= b; ++n)
            out[n] = lm[a] + (lm[b] - lm[a]) * (double)(n - a) / (double)(b - a);
    }
    out[upto] = lm[hull.back()];
    return GrowthSequence::from_table(out);
}

bool check_positive_increase(const Weight& K, double a, double t0, double r_max) {
    // C(R) = max_{t0<=t<=R} t^{-a}K(t) / (R^{-a}K(R)); positive increase iff
    // sup_R C(R) stabilizes as the range doubles.
    const double ratio = 1.02;
    double prefix_max = -kInf;
    double c_half = -kInf, c_full = -kInf;
    const double r_half = r_max / 2.0;
    for (double t = t0; t <= r_max; t *= ratio) {
        double v = -a * std::log(t) + std::log(K(t));
        prefix_max = std::max(prefix_max, v);
        double c_here = prefix_max - v;  // log C(R) at R = t
        if (t <= r_half) c_half = std::max(c_half, c_here);
        c_full = std::max(c_full, c_here);
    }
    return c_full <= c_half + std::log(1.05);
}

bool check_regular_growth(const std::function<double(double)>& V, const Weight& eta,
                          double Cprime, double t0, double t_hi) {
    for (double t = t0; t <= t_hi; t *= 1.02) {
        double lhs = V(Cprime * t) / V(t);
        double rhs = 1.0 + 1.0 / eta(t);
        if (!(lhs >= rhs - 1e-12 * std::abs(rhs))) return false;
    }
    return true;
}

std::optional<double> scan_regular_growth_t0(const std::function<double(double)>& V,
                                             const Weight& eta, double Cprime,
                                             double t_hi) {
    double last_fail = 0.0;
    bool any_fail = false;
    for (double t = 1.0; t <= t_hi; t *= 1.05) {
        double lhs = V(Cprime * t) / V(t);
        double rhs = 1.0 + 1.0 / eta(t);
        if (!(lhs >= rhs)) {
            last_fail = t;
            any_fail = true;
        }
    }
    double t0 = any_fail ? last_fail * 1.05 : 1.0;
    if (t0 > t_hi / 4.0) return std::nullopt;  // never starts holding with margin
    return t0;
}

double inverse_monotone(const std::function<double(double)>& V, double y, double x_lo,
                        double x_hi) {
    double f_lo = V(x_lo), f_hi = V(x_hi);
    if (!(f_lo <= y && y <= f_hi))
        throw OutOfRange("inverse_monotone: y = " + std::to_string(y) +
                         " outside [V(x_lo), V(x_hi)] = [" + std::to_string(f_lo) + ", " +
                         std::to_string(f_hi) + "]");
    const double tol = 1e-10 * std::max(1.0, std::abs(y));
    double lo = x_lo, hi = x_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = V(mid);
        if (std::abs(v - y) <= tol) return mid;
        if (v < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

CompositeWeight::CompositeWeight(Weight M, Weight K, Kind kind, int m)
    : M_(std::move(M)), K_(std::move(K)), kind_(kind), m_(m) {
    if (m_ < 1) throw SchemaError("composite weight order m must be >= 1");
    // log log t requires t > 1 for MKlog
    s_lo_ = (kind_ == Kind::MKlog) ? 1e-6 : std::log(1.0 + 1e-9);
}

double CompositeWeight::eval_log(double s) const {
    double logK = K_.log_eval_log(s);
    double mv = std::exp(M_.log_eval_log(s));
    switch (kind_) {
        case Kind::MK: return mv * (s + logK);
        case Kind::MKlog: return mv * (s + std::log(s) + logK);
        case Kind::MKm: return mv * (m_ * s + std::log(s) + logK);
    }
    return 0.0;
}

double CompositeWeight::eval(double t) const { return eval_log(std::log(t)); }

double CompositeWeight::inverse_log(double y) const {
    double s_lo = s_lo_;
    if (eval_log(s_lo) > y)
        throw OutOfRange("composite weight inverse: y below value at domain minimum");
    double s_hi = std::max(2.0, 2.0 * s_lo);
    int guard = 0;
    while (eval_log(s_hi) < y) {
        s_hi *= 2.0;
        if (++guard > 64) throw OutOfRange("composite weight inverse: y not reached");
    }
    auto f = [this](double s) { return eval_log(s); };
    // bisection in s with the same tolerance contract as inverse_monotone
    const double tol = 1e-10 * std::max(1.0, std::abs(y));
    double lo = s_lo, hi = s_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = f(mid);
        if (std::abs(v - y) <= tol) return mid;
        (v < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double CompositeWeight::inverse(double y) const { return std::exp(inverse_log(y)); }

} // namespace tauber::growth
