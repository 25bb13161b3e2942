#include "npb/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>

namespace npb {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

int signed_wavenumber(int j, int n) { return j < n / 2 ? j : j - n; }

} // namespace

struct Grid::Plans {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;

    explicit Plans(int n)
    {
        std::vector<double> real(static_cast<std::size_t>(n) * n * n);
        std::vector<std::complex<double>> cplx(static_cast<std::size_t>(n) * n * (n / 2 + 1));
        auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
        // ESTIMATE keeps plan selection (and therefore rounding) identical run to run.
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        std::lock_guard lock(planner_mutex());
        r2c = fftw_plan_dft_r2c_3d(n, n, n, real.data(), c, flags);
        c2r = fftw_plan_dft_c2r_3d(n, n, n, c, real.data(), flags);
        if (!r2c || !c2r) {
            throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
        }
    }

    ~Plans()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(r2c);
        fftw_destroy_plan(c2r);
    }

    Plans(const Plans&) = delete;
    Plans& operator=(const Plans&) = delete;
};

Grid::Grid(int n) : n_(n)
{
    if (n < 8 || n % 2 != 0) {
        throw std::invalid_argument("grid resolution must be even and >= 8, got " + std::to_string(n));
    }
    size_ = static_cast<std::size_t>(n) * n * n;
    const int h = n / 2 + 1;
    spectral_size_ = static_cast<std::size_t>(n) * n * h;

    k2_.resize(spectral_size_);
    for (auto& v : kd_) {
        v.resize(spectral_size_);
    }
    mask_.resize(spectral_size_);
    weight_.resize(spectral_size_);

    const int cutoff = n / 3;
    std::size_t s = 0;
    for (int j3 = 0; j3 < n; ++j3) {
        const int k3 = signed_wavenumber(j3, n);
        for (int j2 = 0; j2 < n; ++j2) {
            const int k2 = signed_wavenumber(j2, n);
            for (int k1 = 0; k1 < h; ++k1, ++s) {
                k2_[s] = double(k1) * k1 + double(k2) * k2 + double(k3) * k3;
                kd_[0][s] = (k1 == n / 2) ? 0.0 : k1;
                kd_[1][s] = (j2 == n / 2) ? 0.0 : k2;
                kd_[2][s] = (j3 == n / 2) ? 0.0 : k3;
                mask_[s] = (k1 <= cutoff && std::abs(k2) <= cutoff && std::abs(k3) <= cutoff) ? 1 : 0;
                weight_[s] = (k1 == 0 || k1 == n / 2) ? 1.0 : 2.0;
            }
        }
    }

    plans_ = std::make_shared<const Plans>(n);
}

std::array<int, 3> Grid::wavenumber(std::size_t s) const
{
    const int h = half();
    const int k1 = static_cast<int>(s % h);
    const int j2 = static_cast<int>((s / h) % n_);
    const int j3 = static_cast<int>(s / (static_cast<std::size_t>(h) * n_));
    // The stored Nyquist entries represent -n/2 along axes 2 and 3.
    return {k1, signed_wavenumber(j2, n_), signed_wavenumber(j3, n_)};
}

std::size_t Grid::spectral_index(int k1, int k2, int k3) const
{
    if (k1 < 0 || k1 > n_ / 2) {
        throw std::out_of_range("k1 must lie in [0, n/2]");
    }
    const int j2 = (k2 % n_ + n_) % n_;
    const int j3 = (k3 % n_ + n_) % n_;
    return static_cast<std::size_t>(k1) + static_cast<std::size_t>(half()) * (j2 + static_cast<std::size_t>(n_) * j3);
}

std::array<double, 3> Grid::coordinate(std::size_t i) const
{
    const std::size_t n = n_;
    return {double(i % n) / n_, double((i / n) % n) / n_, double(i / (n * n)) / n_};
}

void Grid::forward(std::span<const double> in, std::span<std::complex<double>> out) const
{
    if (in.size() != size_ || out.size() != spectral_size_) {
        throw std::invalid_argument("forward transform size mismatch");
    }
    // r2c does not modify its input.
    fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(size_);
    for (auto& c : out) {
        c *= scale;
    }
}

void Grid::inverse(std::span<const std::complex<double>> in, std::span<double> out) const
{
    if (in.size() != spectral_size_ || out.size() != size_) {
        throw std::invalid_argument("inverse transform size mismatch");
    }
    thread_local std::vector<std::complex<double>> scratch;
    scratch.assign(in.begin(), in.end());
    fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

SpectralField Grid::forward(const ScalarField& f) const
{
    SpectralField out(spectral_size_);
    forward(f.values, out);
    return out;
}

ScalarField Grid::inverse(const SpectralField& f_hat) const
{
    ScalarField out(size_);
    inverse(f_hat, out.values);
    return out;
}

} // namespace npb
