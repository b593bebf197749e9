#include "tauber/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace tauber::num {
namespace {

std::mutex g_plan_mutex;

fftw_plan plan_for(int n, bool forward) {
    // Plans are cached per (size, direction) and executed via the new-array
    // interface; FFTW plan creation is not thread-safe, execution is.
    static std::map<std::pair<int, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(n, forward ? 1 : 0);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(n);
    fftw_plan p = fftw_plan_dft_1d(n, buf, buf, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    cache[key] = p;
    return p;
}

} // namespace

void fft(cvec& a, bool forward) {
    int n = (int)a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft: size not a power of two");
    fftw_plan p = plan_for(n, forward);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(a.data()),
                     reinterpret_cast<fftw_complex*>(a.data()));
}

MasterGrid::MasterGrid(int n_, double dt_) : n(n_), dt(dt_), dx(2.0 * M_PI / (n_ * dt_)) {
    if (n % 4 != 0) throw std::invalid_argument("MasterGrid: n must be divisible by 4");
}

// With signed indices j,k in [-n/2, n/2): sum_k f[k] e^{+2*pi*i*jk/n}. Mapping to
// 0-based storage introduces (-1)^j (-1)^k twiddles; the e^{i*pi*n/2} factor is 1
// because n is divisible by 4.
void MasterGrid::to_x(cvec& a) const {
    for (int k = 1; k < n; k += 2) a[k] = -a[k];
    fft(a, /*forward=*/false);
    for (int j = 0; j < n; ++j) {
        a[j] *= dt;
        if (j & 1) a[j] = -a[j];
    }
}

void MasterGrid::to_t(cvec& a) const {
    for (int j = 1; j < n; j += 2) a[j] = -a[j];
    fft(a, /*forward=*/true);
    for (int k = 0; k < n; ++k) {
        a[k] *= dx;
        if (k & 1) a[k] = -a[k];
    }
}

} // namespace tauber::num
