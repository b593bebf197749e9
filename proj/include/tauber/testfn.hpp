#ifndef TAUBER_TESTFN_HPP
#define TAUBER_TESTFN_HPP

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "tauber/fft.hpp"

namespace tauber::testfn {

inline constexpr double kEpsilon = 1.0 / 24.0;
inline constexpr double kDerivA = 124.0;  // admissible derivative-bound base

// Box chain u_m: normalized (m+1)-fold convolution of boxes with
// a_0 = a_1 = eps/4 and a_j = eps/(2(m-1)) for j >= 2 (m >= 2); m = 1 uses
// just the two eps/4 boxes. Samples live on a uniform t grid; the dual side
// has the exact closed form prod_j sinc(a_j x).
struct BoxChain {
    int m = 0;
    double epsilon = kEpsilon;
    std::vector<double> a;        // a_0..a_m
    double dt = 0.0;
    long lo_index = 0;            // grid index offset of vals[0], signed units of dt
    std::vector<double> vals;     // u_m(t) at t = (lo_index + i) * dt

    double hat(double x) const;           // prod sinc(a_j x)
    double eval(double t) const;          // interpolated sample value
    // Exact j-th derivative via the divided-box difference formula (j <= m-1).
    double deriv(int j, double t) const;
    double max_abs_deriv(int j) const;    // max over the support grid
};

BoxChain build_box_chain(int m, double epsilon, double dt);

// Mollifier psi: truncated box chain with widths a0 * j^{-1/gamma}
// (sum a_j = 1/8), squared, convolved with the unit box, rescaled by 3 and
// normalized to unit integral. Supported in (-1/4, 1/4) with psi >= 1 on
// (-2 eps, 2 eps).
struct Mollifier {
    double gamma = 0.0;
    double a0 = 0.0;
    int J = 0;                    // boxes kept (a_J >= dt)
    double dt = 0.0;
    long lo_index = 0;
    std::vector<double> vals;     // psi(t) samples
    double m_norm = 0.0;          // int psi_1^2 before normalization

    // diagnostics for the |psi_hat| ~ C exp(-c y^gamma) envelope
    double fitted_c = 0.0, fitted_C = 0.0, fitted_gamma = 0.0;

    double eval(double t) const;
    // Deep-tail transform of the (continuous) truncated construction; valid to
    // magnitudes far below the sampling roundoff floor.
    double psi_hat_deep(double y) const;
};

// Throws DecayNotAchieved if the measured log-log decay slope of |psi_hat|
// over the last decade of [1e2, 1e4] falls below gamma - 0.05.
Mollifier build_mollifier(double gamma, double epsilon = kEpsilon,
                          double dt = 80.0 / (1 << 21));

enum class Kind { OddPattern, NonNegative, BerryEsseenKernel };

struct TestFunction {
    int n = 0;
    double epsilon = kEpsilon;
    double gamma = 0.0;
    double bandwidth = 0.0;       // measured support radius of the transform

    std::vector<double> x_grid;   // uniform, stored signal window
    std::vector<double> phi_vals;
    std::vector<double> t_grid;   // uniform
    std::vector<std::complex<double>> phihat_vals;

    struct Meta {
        Kind kind = Kind::OddPattern;
        std::vector<double> a;    // box widths of the underlying chain
        double c_n = 0.0;
        double d_n = 0.0;
        int branch = 2;           // 0: c>=1/2, 1: c<=-1/2, 2: pi/eps shift
        double fitted_env_C = 0.0;   // max |phi| e^{|x|^gamma} on the signal window
        double noise_floor = 0.0;    // |phi| below this is sampling roundoff
        int n_fft = 0;
        double dt = 0.0, dx = 0.0;
    } meta;

    double eval_space(double y) const;                // 0 outside the grid
    std::complex<double> eval_freq(double t) const;   // 0 outside the band

    // max_{|t|<=1} |phihat^{(j)}(t)| by windowed spectral differentiation.
    double max_abs_hat_deriv(int j) const;
    // phihat^{(j)} sampled on the internal t window (|t| <= 1.25).
    std::vector<std::complex<double>> hat_deriv_samples(int j) const;
    const std::vector<double>& internal_t_grid() const;
    bool has_internal() const { return internal_ != nullptr; }

    // int |y|^m exp(|y|^alpha) |phi(y)| dy with an error estimate.
    double weighted_abs_moment(int m, double alpha, double* err = nullptr) const;

    struct Internal;
    std::shared_ptr<const Internal> internal_;
};

// phi_n = phi_{3,n+2} of the band-limited sequence; gamma in (0,1).
TestFunction build_phi_n(int n, double gamma);

// Even-order variant: the normalized |phi_{1,n+2}|^2 stage. Non-negative,
// unit mass, same band limit; used by the higher-order sandwich for even m.
TestFunction build_phi_nonneg(int n, double gamma);

// The explicit kernel x sin^4(x/4 - 3/(2 pi)) / (16 (x/4 - 3/(2 pi))^4).
TestFunction berry_esseen_phi();

struct PropertyReport {
    struct Entry {
        std::string name;
        bool pass = false;
        bool skipped = false;
        double measure = 0.0;     // measured slack / constant
    };
    std::vector<Entry> entries;
    bool all_pass = true;
};

// Batch check of the five defining properties; never mutates the input.
PropertyReport verify_testfn(const TestFunction& tf);

} // namespace tauber::testfn

#endif
