#ifndef TAUBER_WEIGHTS_HPP
#define TAUBER_WEIGHTS_HPP

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace tauber::growth {

enum class Monotone { none, non_decreasing, non_increasing };

class WeightImpl;

// A positive scalar function on a half-line. Closed-form families additionally
// provide log-domain evaluation (argument t = e^ell) and a log prefix integral,
// which the rate machinery needs because optimal lambda can be exp(Theta(x)).
class Weight {
public:
    Weight() = default;
    explicit Weight(std::shared_ptr<const WeightImpl> impl) : impl_(std::move(impl)) {}

    double operator()(double t) const;
    double eval(double t) const { return (*this)(t); }

    // log W(e^ell). Works for any ell for closed-form families; falls back to
    // direct evaluation (ell <= ~690) otherwise.
    double log_eval_log(double ell) const;

    // log of int_0^{e^ell} W(t) dt. Exact or asymptotic for closed-form
    // families; adaptive quadrature with an incremental cache otherwise.
    double log_prefix_log(double ell) const;

    // Family-level q-th power, exact where the family is closed under powers.
    std::optional<Weight> pow_family(double q) const;

    Monotone monotone() const;
    double domain_min() const;
    std::string describe() const;
    bool valid() const { return impl_ != nullptr; }

private:
    std::shared_ptr<const WeightImpl> impl_;
};

// Built-in families.
Weight w_const(double c);
Weight w_power(double exponent);                       // t^a
Weight w_log_shift(double shift);                      // log(t + shift)
Weight w_polylog(double M, double g, double a, double b);  // (t+a)^M log^g(t+b)
Weight w_logpow(double alpha, double t0);              // max(t0, log^alpha t)
Weight w_loglogpow(double alpha, double beta, double t0);
Weight w_powlog(double alpha, double beta, double t0); // max(t0, t^a log^b t)
Weight w_exppow(double C, double gamma);               // exp(C t^gamma)
Weight w_log_over_1pt(double shift);                   // log(t+shift)/(1+t)
Weight w_scaled(double s, Weight inner);
Weight w_maxconst(double t0, Weight inner);
Weight w_expr(const std::string& src);
Weight w_omega_powlog(double beta, double gammap);     // delta^beta log^{-gp}(1/delta)

// JSON rule vocabulary, e.g. {"kind":"power","exp":1.0} or {"kind":"expr","src":"..."}.
Weight parse_weight(const nlohmann::json& rule);

// Grid check of the monotonicity invariant (relative slack 1e-12).
bool check_monotone_on_grid(const Weight& w, double t_lo, double t_hi,
                            double ratio = 1.02, int max_points = 20000);

} // namespace tauber::growth

#endif
