#ifndef TAUBER_FFT_HPP
#define TAUBER_FFT_HPP

#include <complex>
#include <vector>

namespace tauber::num {

using cvec = std::vector<std::complex<double>>;

// Unnormalized DFTs, any power-of-two length.
//   forward:  X[k] = sum_j x[j] e^{-2*pi*i*jk/n}
//   backward: X[k] = sum_j x[j] e^{+2*pi*i*jk/n}
void fft(cvec& a, bool forward);

// Paired uniform grids: t_k = (k - n/2)*dt and x_j = (j - n/2)*dx with
// dx = 2*pi/(n*dt). Arrays are stored in natural coordinate order; index i
// holds the sample at coordinate (i - n/2)*spacing. n must be divisible by 4.
//
// to_x approximates F(x_j) = int f(t) e^{+i x_j t} dt (trapezoid, step dt);
// to_t approximates G(t_k) = int g(x) e^{-i t_k x} dx. The two maps are exact
// discrete inverses up to the 1/(2*pi) factor carried by the caller.
struct MasterGrid {
    int n = 0;
    double dt = 0.0;
    double dx = 0.0;

    MasterGrid() = default;
    MasterGrid(int n_, double dt_);

    double t(int i) const { return (i - n / 2) * dt; }
    double x(int i) const { return (i - n / 2) * dx; }
    int index_t(double tv) const { return (int)std::lround(tv / dt) + n / 2; }
    int index_x(double xv) const { return (int)std::lround(xv / dx) + n / 2; }

    void to_x(cvec& a) const;
    void to_t(cvec& a) const;
};

} // namespace tauber::num

#endif
