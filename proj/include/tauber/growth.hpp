#ifndef TAUBER_GROWTH_HPP
#define TAUBER_GROWTH_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tauber/weights.hpp"

namespace tauber::growth {

// A positive sequence M_n held in the log domain (n^n overflows binary64 near
// n = 143; all comparisons happen on log M_n). Tabulation is lazy and guarded
// for concurrent use.
class GrowthSequence {
public:
    struct Flags {
        std::optional<bool> log_convex;
        std::optional<bool> non_quasianalytic;
        std::optional<bool> subanalytic;
    };

    GrowthSequence(std::function<double(long)> log_rule, long max_index, std::string name);

    static GrowthSequence power_nn();                 // n^n with M_0 = 1
    static GrowthSequence gevrey(double alpha);       // (n!)^{1/alpha}
    static GrowthSequence pow_alpha_nn(double ap);    // n^{alpha' n} with M_0 = 1
    static GrowthSequence n_log_n();                  // (n log(n+1))^n with M_0 = 1
    static GrowthSequence ones();
    static GrowthSequence from_table(const std::vector<double>& logM);

    double logM(long n) const;
    long max_index() const { return max_index_; }
    long tabulated() const;
    const std::string& name() const { return name_; }

    Flags& flags() { return flags_; }
    const Flags& flags() const { return flags_; }

    // Subanalyticity witnesses: with the given L, the largest C with
    // M_n >= C L^n n^n over the tabulation (0 if none).
    double subanalytic_witness(double L, long upto) const;

    double L = 1.0;     // (SA) scale witness
    double C_sa = 1.0;  // (SA) constant witness

private:
    std::function<double(long)> rule_;
    long max_index_;
    std::string name_;
    Flags flags_;
    mutable std::vector<double> cache_;
    mutable std::shared_ptr<std::mutex> mutex_;
};

GrowthSequence parse_sequence(const nlohmann::json& rule);

// sup_{0 <= n} log(x^n / M_n), extending the tabulation until the running term
// drops e^{-20} below the current sup. Throws NonConvergent if the sup has not
// stabilized by max_index.
double associated_function(const GrowthSequence& seq, double x);

bool check_log_convex(const GrowthSequence& seq, long upto);

enum class TriState { False, True, Inconclusive };

// Decides sum M_n/M_{n+1} < infinity by ratio extrapolation over the last 25%
// of the tabulation; Inconclusive when neither criterion triggers.
TriState check_non_quasianalytic(const GrowthSequence& seq, double tail_tol,
                                 long upto = 0);

// Largest log-convex minorant (lower convex hull of (n, log M_n)), tabulated.
GrowthSequence log_convex_minorant(const GrowthSequence& seq, long upto);

// Positive increase: sup over grid pairs t <= R of (t^{-a}K(t))/(R^{-a}K(R))
// stays bounded as R_max doubles.
bool check_positive_increase(const Weight& K, double a, double t0,
                             double r_max = 1e8);

// V(C' t)/V(t) >= 1 + 1/eta(t) for all grid t >= t0.
bool check_regular_growth(const std::function<double(double)>& V, const Weight& eta,
                          double Cprime, double t0, double t_hi = 1e8);

// Smallest grid t0 from which the regular-growth inequality holds through t_hi.
std::optional<double> scan_regular_growth_t0(const std::function<double(double)>& V,
                                             const Weight& eta, double Cprime,
                                             double t_hi = 1e8);

// Bracketing bisection for strictly increasing V; |V(x)-y| <= 1e-10 max(1,|y|).
double inverse_monotone(const std::function<double(double)>& V, double y, double x_lo,
                        double x_hi);

// Composite weights M_K, M_{K,log}, M_{K,m} with log-domain evaluation
// (argument s = log t) and inversion; the inverse of these gives the decay
// rate of the quantified theorems.
class CompositeWeight {
public:
    enum class Kind { MK, MKlog, MKm };

    CompositeWeight(Weight M, Weight K, Kind kind, int m = 1);

    double eval(double t) const;
    double eval_log(double s) const;  // value at t = e^s (value itself, not log)
    // Solves eval_log(s) = y for s in [s_lo, s_hi] (auto-extends s_hi).
    double inverse_log(double y) const;
    double inverse(double y) const;   // e^{inverse_log(y)}, may overflow

    double domain_min_log() const { return s_lo_; }
    Kind kind() const { return kind_; }

private:
    Weight M_, K_;
    Kind kind_;
    int m_;
    double s_lo_;
};

} // namespace tauber::growth

#endif
