#include "tauber/weights.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tauber/errors.hpp"
#include "tauber/expr.hpp"
#include "tauber/quadrature.hpp"
#include "tauber/util.hpp"

namespace tauber::growth {

class WeightImpl {
public:
    virtual ~WeightImpl() = default;
    virtual double eval(double t) const = 0;
    virtual std::string describe() const = 0;
    virtual Monotone monotone() const { return Monotone::none; }
    virtual double domain_min() const { return 0.0; }

    virtual double log_eval_log(double ell) const {
        if (ell > 690.0)
            throw NumericalFault("weight '" + describe() +
                                 "' has no closed log form; cannot evaluate at log t = " +
                                 std::to_string(ell));
        double v = eval(std::exp(ell));
        if (v <= 0.0) return -kInf;
        return std::log(v);
    }

    virtual std::shared_ptr<const WeightImpl> pow_family(double) const { return nullptr; }

    // Default prefix integral: adaptive quadrature with an incremental cache.
    // Sweeps with non-decreasing ell cost O(1) amortized per call.
    virtual double log_prefix_log(double ell) const {
        if (ell > std::log(1e14))
            throw NumericalFault("prefix integral of '" + describe() +
                                 "' not available at log t = " + std::to_string(ell));
        double lambda = std::exp(ell);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = prefix_cache_.lower_bound(lambda);
        double base_t = 0.0, base_v = 0.0;
        if (it != prefix_cache_.begin()) {
            --it;
            base_t = it->first;
            base_v = it->second;
        }
        double inc = 0.0;
        if (lambda > base_t)
            inc = num::integrate([this](double t) { return eval(t); }, base_t, lambda,
                                 1e-13 * std::max(1.0, base_v), 1e-11)
                      .value;
        double total = base_v + inc;
        prefix_cache_[lambda] = total;
        if (prefix_cache_.size() > 4096) prefix_cache_.erase(prefix_cache_.begin());
        return total > 0.0 ? std::log(total) : -kInf;
    }

private:
    mutable std::mutex cache_mutex_;
    mutable std::map<double, double> prefix_cache_;
};

double Weight::operator()(double t) const { return impl_->eval(t); }
double Weight::log_eval_log(double ell) const { return impl_->log_eval_log(ell); }
double Weight::log_prefix_log(double ell) const { return impl_->log_prefix_log(ell); }
Monotone Weight::monotone() const { return impl_->monotone(); }
double Weight::domain_min() const { return impl_->domain_min(); }
std::string Weight::describe() const { return impl_ ? impl_->describe() : "<null>"; }
std::optional<Weight> Weight::pow_family(double q) const {
    auto p = impl_->pow_family(q);
    if (!p) return std::nullopt;
    return Weight(p);
}

namespace {

// log(e^a - e^b) for a > b.
double logdiffexp(double a, double b) {
    return a + std::log1p(-std::exp(b - a));
}

// ----- const -----
class ConstW : public WeightImpl {
public:
    explicit ConstW(double c) : c_(c) {
        if (c < 0.0) throw SchemaError("const weight must be >= 0");
    }
    double eval(double) const override { return c_; }
    double log_eval_log(double) const override { return c_ > 0 ? std::log(c_) : -kInf; }
    double log_prefix_log(double ell) const override {
        return c_ > 0 ? std::log(c_) + ell : -kInf;
    }
    Monotone monotone() const override { return Monotone::non_decreasing; }
    std::shared_ptr<const WeightImpl> pow_family(double q) const override {
        return std::make_shared<ConstW>(std::pow(c_, q));
    }
    std::string describe() const override {
        return "const(" + std::to_string(c_) + ")";
    }

private:
    double c_;
};

// ----- t^a -----
class PowerW : public WeightImpl {
public:
    explicit PowerW(double a) : a_(a) {}
    double eval(double t) const override { return std::pow(t, a_); }
    double log_eval_log(double ell) const override { return a_ * ell; }
    double log_prefix_log(double ell) const override {
        if (a_ <= -1.0) throw NormDiverges("int of t^a with a <= -1 diverges at 0");
        return (a_ + 1.0) * ell - std::log(a_ + 1.0);
    }
    Monotone monotone() const override {
        return a_ >= 0 ? Monotone::non_decreasing : Monotone::non_increasing;
    }
    std::shared_ptr<const WeightImpl> pow_family(double q) const override {
        return std::make_shared<PowerW>(a_ * q);
    }
    std::string describe() const override { return "power(" + std::to_string(a_) + ")"; }

private:
    double a_;
};

// ----- log(t + s) -----
class LogShiftW : public WeightImpl {
public:
    explicit LogShiftW(double s) : s_(s) {
        if (s <= 1.0) throw SchemaError("log weight requires shift > 1 for positivity at 0");
    }
    double eval(double t) const override { return std::log(t + s_); }
    double log_eval_log(double ell) const override {
        // log log(e^ell + s)
        double inner = (ell > 40.0) ? ell + std::exp(std::log(s_) - ell)
                                    : std::log(std::exp(ell) + s_);
        return std::log(inner);
    }
    double log_prefix_log(double ell) const override {
        // int_0^L log(t+s) dt = (L+s)log(L+s) - L - s log s
        if (ell <= 40.0) {
            double L = std::exp(ell);
            return std::log((L + s_) * std::log(L + s_) - L - s_ * std::log(s_));
        }
        // (L+s)log(L+s) - L ~ L(log L - 1) + s log L + ...; compute in log domain
        double logL = ell;
        double v = logL + std::log(logL - 1.0 + (s_ * logL + s_) * std::exp(-logL));
        return v;
    }
    Monotone monotone() const override { return Monotone::non_decreasing; }
    std::string describe() const override { return "log(t+" + std::to_string(s_) + ")"; }

private:
    double s_;
};

// ----- (t+a)^M log^g(t+b) -----
class PolyLogW : public WeightImpl {
public:
    PolyLogW(double M, double g, double a, double b) : M_(M), g_(g), a_(a), b_(b) {
        if (a <= 0.0 || b <= 1.0)
            throw SchemaError("polylog weight requires a > 0 and b > 1");
    }
    double eval(double t) const override {
        return std::pow(t + a_, M_) * std::pow(std::log(t + b_), g_);
    }
    double log_eval_log(double ell) const override {
        double log_tpa, log_log_tpb;
        if (ell > 40.0) {
            log_tpa = ell + std::log1p(a_ * std::exp(-ell));
            log_log_tpb = std::log(ell + std::log1p(b_ * std::exp(-ell)));
        } else {
            double t = std::exp(ell);
            log_tpa = std::log(t + a_);
            log_log_tpb = std::log(std::log(t + b_));
        }
        return M_ * log_tpa + g_ * log_log_tpb;
    }
    double log_prefix_log(double ell) const override {
        if (M_ < -1.0 || (M_ == -1.0 && g_ <= -1.0))
            throw NormDiverges("polylog prefix integral diverges");
        if (g_ == 0.0) {
            if (M_ == -1.0) {
                // log((L+a)/a)
                if (ell <= 40.0) return std::log(std::log((std::exp(ell) + a_) / a_));
                return std::log(ell - std::log(a_) + std::log1p(a_ * std::exp(-ell)));
            }
            // ((L+a)^{M+1} - a^{M+1})/(M+1)
            double m1 = M_ + 1.0;
            double log_tpa = (ell > 40.0) ? ell + std::log1p(a_ * std::exp(-ell))
                                          : std::log(std::exp(ell) + a_);
            double big = m1 * log_tpa;
            double small = m1 * std::log(a_);
            double diff = (m1 > 0) ? logdiffexp(big, small) : logdiffexp(small, big);
            return diff - std::log(std::abs(m1));
        }
        // g != 0: numeric head, first-order asymptotic beyond, matched at handoff.
        const double kHandoffEll = std::log(1e10);
        if (ell <= kHandoffEll) return WeightImpl::log_prefix_log(ell);
        std::call_once(handoff_once_, [this] {
            handoff_log_ = WeightImpl::log_prefix_log(std::log(1e10));
            handoff_asy_ = asymptotic_log(std::log(1e10));
        });
        return asymptotic_log(ell) + (handoff_log_ - handoff_asy_);
    }
    Monotone monotone() const override {
        if (M_ >= 0 && g_ >= 0) return Monotone::non_decreasing;
        if (M_ <= 0 && g_ <= 0) return Monotone::non_increasing;
        return Monotone::none;
    }
    std::shared_ptr<const WeightImpl> pow_family(double q) const override {
        return std::make_shared<PolyLogW>(M_ * q, g_ * q, a_, b_);
    }
    std::string describe() const override {
        std::ostringstream os;
        os << "(t+" << a_ << ")^" << M_ << "*log^" << g_ << "(t+" << b_ << ")";
        return os.str();
    }

private:
    // leading term of int_0^L (t+a)^M log^g(t+b) dt for large L
    double asymptotic_log(double ell) const {
        double m1 = M_ + 1.0;
        if (m1 > 0.0) {
            double corr = std::log1p(std::max(-0.9, -g_ / (m1 * ell)));
            return m1 * ell + g_ * std::log(ell) - std::log(m1) + corr;
        }
        // M == -1: log^{g+1}(L)/(g+1)
        return (g_ + 1.0) * std::log(ell) - std::log(g_ + 1.0);
    }
    double M_, g_, a_, b_;
    mutable std::once_flag handoff_once_;
    mutable double handoff_log_ = 0.0, handoff_asy_ = 0.0;
};

// ----- max(t0, log^alpha t) -----
class LogPowW : public WeightImpl {
public:
    LogPowW(double alpha, double t0) : alpha_(alpha), t0_(t0) {
        if (t0 <= 0.0) throw SchemaError("logpow weight requires t0 > 0");
    }
    double eval(double t) const override {
        if (t <= 1.0) return t0_;
        return std::max(t0_, std::pow(std::log(t), alpha_));
    }
    double log_eval_log(double ell) const override {
        if (ell <= 0.0) return std::log(t0_);
        return std::max(std::log(t0_), alpha_ * std::log(ell));
    }
    Monotone monotone() const override {
        return alpha_ >= 0 ? Monotone::non_decreasing : Monotone::none;
    }
    std::string describe() const override {
        return "max(" + std::to_string(t0_) + ",log^" + std::to_string(alpha_) + " t)";
    }

private:
    double alpha_, t0_;
};

// ----- max(t0, log^alpha t * (log log t)^beta) -----
class LogLogPowW : public WeightImpl {
public:
    LogLogPowW(double alpha, double beta, double t0) : alpha_(alpha), beta_(beta), t0_(t0) {}
    double eval(double t) const override {
        if (t <= std::exp(1.0)) return t0_;
        double l = std::log(t);
        return std::max(t0_, std::pow(l, alpha_) * std::pow(std::log(l), beta_));
    }
    double log_eval_log(double ell) const override {
        if (ell <= 1.0) return std::log(t0_);
        return std::max(std::log(t0_), alpha_ * std::log(ell) + beta_ * std::log(std::log(ell)));
    }
    Monotone monotone() const override { return Monotone::non_decreasing; }
    std::string describe() const override {
        return "max(t0,log^a t loglog^b t)";
    }

private:
    double alpha_, beta_, t0_;
};

// ----- max(t0, t^alpha log^beta t) -----
class PowLogW : public WeightImpl {
public:
    PowLogW(double alpha, double beta, double t0) : alpha_(alpha), beta_(beta), t0_(t0) {}
    double eval(double t) const override {
        if (t <= 1.0) return t0_;
        return std::max(t0_, std::pow(t, alpha_) * std::pow(std::log(t), beta_));
    }
    double log_eval_log(double ell) const override {
        if (ell <= 0.0) return std::log(t0_);
        double v = alpha_ * ell + (beta_ == 0.0 ? 0.0 : beta_ * std::log(ell));
        return std::max(std::log(t0_), v);
    }
    Monotone monotone() const override { return Monotone::non_decreasing; }
    std::string describe() const override {
        return "max(t0,t^" + std::to_string(alpha_) + " log^" + std::to_string(beta_) + " t)";
    }

private:
    double alpha_, beta_, t0_;
};

// ----- exp(C t^gamma) -----
class ExpPowW : public WeightImpl {
public:
    ExpPowW(double C, double gamma) : C_(C), gamma_(gamma) {
        if (gamma <= 0.0) throw SchemaError("exppow weight requires gamma > 0");
    }
    double eval(double t) const override { return std::exp(C_ * std::pow(t, gamma_)); }
    double log_eval_log(double ell) const override { return C_ * std::exp(gamma_ * ell); }
    double log_prefix_log(double ell) const override {
        if (C_ <= 0.0) return WeightImpl::log_prefix_log(ell);
        if (gamma_ == 1.0) {
            // (e^{CL} - 1)/C
            double cl = C_ * std::exp(std::min(ell, 700.0));
            if (ell > 700.0) throw NumericalFault("exppow prefix overflow");
            return logdiffexp(cl, 0.0) - std::log(C_);
        }
        // asymptotic L^{1-gamma} e^{C L^gamma}/(C gamma), matched numerically
        const double handoff = std::log(60.0) / gamma_ / std::log(10.0) * std::log(10.0);
        double h_ell = std::min(std::log(1e10), std::log(std::pow(60.0 / C_, 1.0 / gamma_)));
        if (ell <= h_ell) return WeightImpl::log_prefix_log(ell);
        (void)handoff;
        std::call_once(once_, [this, h_ell] {
            match_ = WeightImpl::log_prefix_log(h_ell) - asy(h_ell);
        });
        return asy(ell) + match_;
    }
    Monotone monotone() const override {
        return C_ >= 0 ? Monotone::non_decreasing : Monotone::non_increasing;
    }
    std::shared_ptr<const WeightImpl> pow_family(double q) const override {
        return std::make_shared<ExpPowW>(C_ * q, gamma_);
    }
    std::string describe() const override {
        return "exp(" + std::to_string(C_) + " t^" + std::to_string(gamma_) + ")";
    }

private:
    double asy(double ell) const {
        return (1.0 - gamma_) * ell + C_ * std::exp(gamma_ * ell) - std::log(C_ * gamma_);
    }
    double C_, gamma_;
    mutable std::once_flag once_;
    mutable double match_ = 0.0;
};

// ----- log(t+shift)/(1+t); prefix ~ ell^2/2 + a*ell + b fitted at large t -----
class LogOver1ptW : public WeightImpl {
public:
    explicit LogOver1ptW(double s) : s_(s) {}
    double eval(double t) const override { return std::log(t + s_) / (1.0 + t); }
    double log_eval_log(double ell) const override {
        double log_log;
        if (ell > 40.0)
            log_log = std::log(ell + std::log1p(s_ * std::exp(-ell)));
        else
            log_log = std::log(std::log(std::exp(ell) + s_));
        double log_1pt = (ell > 40.0) ? ell : std::log1p(std::exp(ell));
        return log_log - log_1pt;
    }
    double log_prefix_log(double ell) const override {
        const double h_ell = std::log(1e8);
        if (ell <= h_ell) return WeightImpl::log_prefix_log(ell);
        std::call_once(once_, [this, h_ell] {
            // fit I(L) = ell^2/2 + a ell + b on two numeric anchors
            double e1 = std::log(1e7), e2 = h_ell;
            double i1 = std::exp(WeightImpl::log_prefix_log(e1));
            double i2 = std::exp(WeightImpl::log_prefix_log(e2));
            a_fit_ = ((i2 - e2 * e2 / 2) - (i1 - e1 * e1 / 2)) / (e2 - e1);
            b_fit_ = (i2 - e2 * e2 / 2) - a_fit_ * e2;
        });
        return std::log(ell * ell / 2 + a_fit_ * ell + b_fit_);
    }
    Monotone monotone() const override { return Monotone::none; }
    std::string describe() const override { return "log(t+s)/(1+t)"; }

private:
    double s_;
    mutable std::once_flag once_;
    mutable double a_fit_ = 0.0, b_fit_ = 0.0;
};

// ----- s * W -----
class ScaledW : public WeightImpl {
public:
    ScaledW(double s, Weight inner) : s_(s), inner_(std::move(inner)) {
        if (s <= 0.0) throw SchemaError("scaled weight requires s > 0");
    }
    double eval(double t) const override { return s_ * inner_(t); }
    double log_eval_log(double ell) const override {
        return std::log(s_) + inner_.log_eval_log(ell);
    }
    double log_prefix_log(double ell) const override {
        return std::log(s_) + inner_.log_prefix_log(ell);
    }
    Monotone monotone() const override { return inner_.monotone(); }
    double domain_min() const override { return inner_.domain_min(); }
    std::string describe() const override {
        return std::to_string(s_) + "*" + inner_.describe();
    }

private:
    double s_;
    Weight inner_;
};

// ----- max(t0, W) -----
class MaxConstW : public WeightImpl {
public:
    MaxConstW(double t0, Weight inner) : t0_(t0), inner_(std::move(inner)) {}
    double eval(double t) const override { return std::max(t0_, inner_(t)); }
    double log_eval_log(double ell) const override {
        return std::max(std::log(t0_), inner_.log_eval_log(ell));
    }
    Monotone monotone() const override {
        return inner_.monotone() == Monotone::non_decreasing ? Monotone::non_decreasing
                                                             : Monotone::none;
    }
    std::string describe() const override {
        return "max(" + std::to_string(t0_) + "," + inner_.describe() + ")";
    }

private:
    double t0_;
    Weight inner_;
};

// ----- expression-backed -----
class ExprW : public WeightImpl {
public:
    explicit ExprW(const std::string& src) : e_(rules::Expr::parse(src)) {}
    double eval(double t) const override { return e_.eval(t); }
    std::string describe() const override { return "expr(" + e_.source() + ")"; }

private:
    rules::Expr e_;
};

// ----- Hoelder modulus delta^beta log^{-gp}(1/delta) -----
class OmegaPowLogW : public WeightImpl {
public:
    OmegaPowLogW(double beta, double gp) : beta_(beta), gp_(gp) {}
    double eval(double d) const override {
        if (d <= 0.0) return 0.0;
        double v = std::pow(d, beta_);
        if (gp_ != 0.0 && d < 1.0) v *= std::pow(std::log(1.0 / d), -gp_);
        return v;
    }
    Monotone monotone() const override { return Monotone::non_decreasing; }
    std::string describe() const override {
        return "delta^" + std::to_string(beta_) + " log^-" + std::to_string(gp_) + "(1/delta)";
    }

private:
    double beta_, gp_;
};

} // namespace

Weight w_const(double c) { return Weight(std::make_shared<ConstW>(c)); }
Weight w_power(double a) { return Weight(std::make_shared<PowerW>(a)); }
Weight w_log_shift(double s) { return Weight(std::make_shared<LogShiftW>(s)); }
Weight w_polylog(double M, double g, double a, double b) {
    return Weight(std::make_shared<PolyLogW>(M, g, a, b));
}
Weight w_logpow(double a, double t0) { return Weight(std::make_shared<LogPowW>(a, t0)); }
Weight w_loglogpow(double a, double b, double t0) {
    return Weight(std::make_shared<LogLogPowW>(a, b, t0));
}
Weight w_powlog(double a, double b, double t0) {
    return Weight(std::make_shared<PowLogW>(a, b, t0));
}
Weight w_exppow(double C, double g) { return Weight(std::make_shared<ExpPowW>(C, g)); }
Weight w_log_over_1pt(double s) { return Weight(std::make_shared<LogOver1ptW>(s)); }
Weight w_scaled(double s, Weight inner) {
    return Weight(std::make_shared<ScaledW>(s, std::move(inner)));
}
Weight w_maxconst(double t0, Weight inner) {
    return Weight(std::make_shared<MaxConstW>(t0, std::move(inner)));
}
Weight w_expr(const std::string& src) { return Weight(std::make_shared<ExprW>(src)); }
Weight w_omega_powlog(double b, double g) {
    return Weight(std::make_shared<OmegaPowLogW>(b, g));
}

Weight parse_weight(const nlohmann::json& rule) {
    if (rule.is_number()) return w_const(rule.get<double>());
    if (!rule.is_object() || !rule.contains("kind"))
        throw SchemaError("weight rule must be an object with a \"kind\" field");
    const std::string kind = rule.at("kind").get<std::string>();
    auto num = [&](const char* key, std::optional<double> dflt = std::nullopt) {
        if (!rule.contains(key)) {
            if (dflt) return *dflt;
            throw SchemaError("weight rule '" + kind + "' missing field \"" + key + "\"");
        }
        return rule.at(key).get<double>();
    };
    if (kind == "const") return w_const(num("value"));
    if (kind == "power") return w_power(num("exp"));
    if (kind == "log") return w_log_shift(num("shift", M_E));
    if (kind == "polylog")
        return w_polylog(num("M"), num("gamma", 0.0), num("a", 1.0), num("b", 2.0));
    if (kind == "logpow") return w_logpow(num("alpha"), num("t0", 1.0));
    if (kind == "loglogpow")
        return w_loglogpow(num("alpha"), num("beta", 0.0), num("t0", 1.0));
    if (kind == "powlog") return w_powlog(num("alpha"), num("beta", 0.0), num("t0", 1.0));
    if (kind == "exppow") return w_exppow(num("C", 1.0), num("gamma", 1.0));
    if (kind == "log_over_1pt") return w_log_over_1pt(num("shift", M_E));
    if (kind == "omega") return w_omega_powlog(num("beta"), num("gammap", 0.0));
    if (kind == "scaled") return w_scaled(num("s"), parse_weight(rule.at("of")));
    if (kind == "maxconst") return w_maxconst(num("t0"), parse_weight(rule.at("of")));
    if (kind == "expr") {
        if (!rule.contains("src")) throw SchemaError("expr weight missing \"src\"");
        return w_expr(rule.at("src").get<std::string>());
    }
    throw SchemaError("unknown weight kind '" + kind + "'");
}

bool check_monotone_on_grid(const Weight& w, double t_lo, double t_hi, double ratio,
                            int max_points) {
    if (w.monotone() == Monotone::none) return true;
    bool incr = w.monotone() == Monotone::non_decreasing;
    double prev = w(t_lo);
    double t = t_lo;
    for (int i = 0; i < max_points && t < t_hi; ++i) {
        t = std::min(t_hi, t * ratio);
        double v = w(t);
        double slack = 1e-12 * std::max({std::abs(v), std::abs(prev), 1.0});
        if (incr ? (v < prev - slack) : (v > prev + slack)) return false;
        prev = v;
    }
    return true;
}

} // namespace tauber::growth
