#include "npb/spectral.hpp"

#include "npb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace npb {

namespace fourier {

double norm2(const SpectralField& f_hat, const Grid& g)
{
    const auto w = g.hermitian_weight();
    double sum = 0.0;
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        sum += w[s] * std::norm(f_hat[s]);
    }
    return sum;
}

double gradient_norm2(const SpectralField& f_hat, const Grid& g)
{
    const auto w = g.hermitian_weight();
    double sum = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        const auto kd = g.derivative_wavenumber(axis);
        for (std::size_t s = 0; s < f_hat.size(); ++s) {
            sum += w[s] * kd[s] * kd[s] * std::norm(f_hat[s]);
        }
    }
    return four_pi_sq * sum;
}

void scale_by_mollifier(SpectralField& f_hat, double eta, const Grid& g)
{
    if (eta == 0.0) {
        return;
    }
    const auto k2 = g.k_squared();
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        f_hat[s] *= std::exp(-eta * k2[s]);
    }
}

void scale_by_heat(SpectralField& f_hat, double coeff, double dt, const Grid& g)
{
    const auto k2 = g.k_squared();
    const double rate = coeff * four_pi_sq * dt;
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        f_hat[s] *= std::exp(-rate * k2[s]);
    }
}

void apply_dealias(SpectralField& f_hat, const Grid& g)
{
    const auto mask = g.dealias_mask();
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        if (!mask[s]) {
            f_hat[s] = 0.0;
        }
    }
}

void apply_leray(SpectralVector& v_hat, const Grid& g)
{
    const auto k1 = g.derivative_wavenumber(0);
    const auto k2 = g.derivative_wavenumber(1);
    const auto k3 = g.derivative_wavenumber(2);
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
        const double kk = k1[s] * k1[s] + k2[s] * k2[s] + k3[s] * k3[s];
        if (kk == 0.0) {
            continue;
        }
        const std::complex<double> kv = k1[s] * v_hat[0][s] + k2[s] * v_hat[1][s] + k3[s] * v_hat[2][s];
        const std::complex<double> c = kv / kk;
        v_hat[0][s] -= k1[s] * c;
        v_hat[1][s] -= k2[s] * c;
        v_hat[2][s] -= k3[s] * c;
    }
}

SpectralField derivative(const SpectralField& f_hat, int axis, const Grid& g)
{
    SpectralField out(f_hat.size());
    accumulate_derivative(out, f_hat, axis, g);
    return out;
}

void accumulate_derivative(SpectralField& acc, const SpectralField& f_hat, int axis, const Grid& g)
{
    const auto kd = g.derivative_wavenumber(axis);
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        acc[s] += std::complex<double>(0.0, two_pi * kd[s]) * f_hat[s];
    }
}

SpectralField invert_poisson(const SpectralField& rho_hat, double epsilon, const Grid& g)
{
    const auto k2 = g.k_squared();
    SpectralField psi(rho_hat.size());
    for (std::size_t s = 1; s < rho_hat.size(); ++s) {
        psi[s] = rho_hat[s] / (epsilon * four_pi_sq * k2[s]);
    }
    psi[0] = 0.0;
    return psi;
}

void axpy(SpectralField& y, double a, const SpectralField& x)
{
    for (std::size_t s = 0; s < y.size(); ++s) {
        y[s] += a * x[s];
    }
}

} // namespace fourier

VectorField gradient(const ScalarField& f, const Grid& g)
{
    const auto f_hat = g.forward(f);
    VectorField out;
    for (int axis = 0; axis < 3; ++axis) {
        out[axis] = g.inverse(fourier::derivative(f_hat, axis, g));
    }
    return out;
}

ScalarField divergence(const VectorField& v, const Grid& g)
{
    auto acc = g.zero_spectrum();
    for (int axis = 0; axis < 3; ++axis) {
        fourier::accumulate_derivative(acc, g.forward(v[axis]), axis, g);
    }
    return g.inverse(acc);
}

ScalarField laplacian(const ScalarField& f, const Grid& g)
{
    auto f_hat = g.forward(f);
    const auto k2 = g.k_squared();
    for (std::size_t s = 0; s < f_hat.size(); ++s) {
        f_hat[s] *= -four_pi_sq * k2[s];
    }
    return g.inverse(f_hat);
}

ScalarField mollify(const ScalarField& f, double eta, const Grid& g)
{
    if (eta < 0.0) {
        throw std::invalid_argument("mollifier parameter must be nonnegative");
    }
    if (eta == 0.0) {
        return f;
    }
    auto f_hat = g.forward(f);
    fourier::scale_by_mollifier(f_hat, eta, g);
    return g.inverse(f_hat);
}

ScalarField dealias(const ScalarField& f, const Grid& g)
{
    auto f_hat = g.forward(f);
    fourier::apply_dealias(f_hat, g);
    return g.inverse(f_hat);
}

double poisson_mean_tolerance(const ScalarField& rho) { return 1e-10 * norm_l2(rho) + 1e-14; }

ScalarField poisson_solve(const ScalarField& rho, double epsilon, const Grid& g)
{
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("permittivity must be positive");
    }
    const double m = mean(rho);
    const double tol = poisson_mean_tolerance(rho);
    if (std::abs(m) > tol) {
        std::ostringstream msg;
        msg << "charge density has mean " << m << " (tolerance " << tol << ")";
        throw NonNeutralSource(msg.str());
    }
    return g.inverse(fourier::invert_poisson(g.forward(rho), epsilon, g));
}

VectorField leray_project(const VectorField& v, const Grid& g)
{
    SpectralVector v_hat{g.forward(v[0]), g.forward(v[1]), g.forward(v[2])};
    fourier::apply_leray(v_hat, g);
    return {g.inverse(v_hat[0]), g.inverse(v_hat[1]), g.inverse(v_hat[2])};
}

ScalarField diffuse_exact(const ScalarField& f, double coeff, double dt, const Grid& g)
{
    if (!(dt > 0.0) || !(coeff > 0.0)) {
        throw std::invalid_argument("diffusion coefficient and dt must be positive");
    }
    auto f_hat = g.forward(f);
    fourier::scale_by_heat(f_hat, coeff, dt, g);
    return g.inverse(f_hat);
}

double mean(const ScalarField& f)
{
    // Neumaier summation: constant fields must average back to themselves
    double sum = 0.0;
    double carry = 0.0;
    for (double v : f.values) {
        const double t = sum + v;
        carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    return (sum + carry) / static_cast<double>(f.size());
}

double min_value(const ScalarField& f) { return *std::min_element(f.values.begin(), f.values.end()); }

double max_abs(const ScalarField& f)
{
    double m = 0.0;
    for (double v : f.values) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double inner(const ScalarField& a, const ScalarField& b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return sum / static_cast<double>(a.size());
}

double inner(const VectorField& a, const VectorField& b)
{
    return inner(a[0], b[0]) + inner(a[1], b[1]) + inner(a[2], b[2]);
}

double norm_l2(const ScalarField& f) { return std::sqrt(inner(f, f)); }

double norm_l2(const VectorField& v) { return std::sqrt(inner(v, v)); }

double norm_l1(const ScalarField& f)
{
    double sum = 0.0;
    for (double v : f.values) {
        sum += std::abs(v);
    }
    return sum / static_cast<double>(f.size());
}

bool all_finite(const ScalarField& f)
{
    return std::all_of(f.values.begin(), f.values.end(), [](double v) { return std::isfinite(v); });
}

} // namespace npb
