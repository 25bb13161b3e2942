/// @file spectral.hpp
/// @brief Fourier-space operators on the unit torus.
///
/// Multipliers follow the integer-wavenumber convention: a derivative along
/// axis j is 2*pi*i*k_j, the Laplacian is -4*pi^2*|k|^2, and the Gaussian
/// mollifier is exp(-eta*|k|^2) (no 2*pi inside the exponent).
///
/// The physical-space functions allocate and return new fields. The
/// in-place Fourier-space kernels below them are what the model and the
/// integrator use to avoid redundant transforms.

#pragma once

#include "npb/grid.hpp"

#include <numbers>

namespace npb {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

VectorField gradient(const ScalarField& f, const Grid& g);
ScalarField divergence(const VectorField& v, const Grid& g);
ScalarField laplacian(const ScalarField& f, const Grid& g);
ScalarField mollify(const ScalarField& f, double eta, const Grid& g);
ScalarField dealias(const ScalarField& f, const Grid& g);

/// Default admissible |mean(rho)|: 1e-10*||rho||_2 + 1e-14.
double poisson_mean_tolerance(const ScalarField& rho);

/// Solves -epsilon*Lap(psi) = rho with zero-mean gauge.
/// @throws NonNeutralSource if |mean(rho)| exceeds poisson_mean_tolerance(rho).
ScalarField poisson_solve(const ScalarField& rho, double epsilon, const Grid& g);

/// Helmholtz projection onto divergence-free fields; the k=0 mode is kept.
VectorField leray_project(const VectorField& v, const Grid& g);

/// Exact heat semigroup: every mode scaled by exp(-coeff*4*pi^2*|k|^2*dt).
ScalarField diffuse_exact(const ScalarField& f, double coeff, double dt, const Grid& g);

// --- grid-average quadrature on the unit torus --------------------------------

double mean(const ScalarField& f);
double min_value(const ScalarField& f);
double max_abs(const ScalarField& f);
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);
double norm_l2(const ScalarField& f);
double norm_l2(const VectorField& v);
double norm_l1(const ScalarField& f);
bool all_finite(const ScalarField& f);

// --- Fourier-space kernels ---------------------------------------------------

namespace fourier {

/// Parseval: grid-average of |f|^2 from half-complex coefficients.
double norm2(const SpectralField& f_hat, const Grid& g);
/// Grid-average of |grad f|^2.
double gradient_norm2(const SpectralField& f_hat, const Grid& g);

void scale_by_mollifier(SpectralField& f_hat, double eta, const Grid& g);
void scale_by_heat(SpectralField& f_hat, double coeff, double dt, const Grid& g);
void apply_dealias(SpectralField& f_hat, const Grid& g);
void apply_leray(SpectralVector& v_hat, const Grid& g);

/// d/dx_axis of f, returned as coefficients.
SpectralField derivative(const SpectralField& f_hat, int axis, const Grid& g);
/// Adds 2*pi*i*k_axis * f_hat into @p acc.
void accumulate_derivative(SpectralField& acc, const SpectralField& f_hat, int axis, const Grid& g);
/// -epsilon*Lap(psi) = rho, zero-mean gauge; no compatibility check.
SpectralField invert_poisson(const SpectralField& rho_hat, double epsilon, const Grid& g);

void axpy(SpectralField& y, double a, const SpectralField& x);

} // namespace fourier

} // namespace npb
