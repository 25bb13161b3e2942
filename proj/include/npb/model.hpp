/// @file model.hpp
/// @brief Non-stiff right-hand sides of the (mollified) Nernst-Planck-Boussinesq system.
///
/// The linear diffusion terms D Lap c_i, nu Lap u and kappa Lap T are not part
/// of these right-hand sides; the integrator applies them exactly. With
/// eta = 0 the unmollified system is recovered.
///
/// All transport terms are assembled in divergence form and dealiased by the
/// 2/3 rule, so every returned scalar right-hand side has zero mean.

#pragma once

#include "npb/grid.hpp"
#include "npb/state.hpp"

#include <vector>

namespace npb {

/// -div(J u c_i) + D (e/k_B) div(z_i c_i / T grad J J psi), one field per species.
/// @throws TemperatureFloorViolated if min T < T*/2.
std::vector<ScalarField> np_rhs(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g);

/// P[ -(J u . grad) u + g (alpha_T (T - T_r) - alpha_S (S - S_r)) e3 - J(rho grad J J psi) ], zero mean.
VectorField momentum_rhs(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref, const PhysParams& p,
                         const Grid& g);

/// -div(J u T).
ScalarField temperature_rhs(const SimState& s, const PhysParams& p, const Grid& g);

/// Fourier coefficients of a full prognostic state.
struct SpectralState {
    std::vector<SpectralField> concentrations;
    SpectralVector velocity;
    SpectralField temperature;
};

SpectralState to_spectral(const SimState& s, const Grid& g);
/// Physical fields of @p hat, stamped with @p time.
SimState to_physical(const SpectralState& hat, double time, const Grid& g);

/// Combined right-hand side of all equations at one stage. @p phys and @p hat
/// must describe the same state; electric fields are recomputed from it.
SpectralState full_rhs(const SimState& phys, const SpectralState& hat, const ReferenceValues& ref,
                       const PhysParams& p, const Grid& g);

/// Building blocks shared by the public right-hand sides and the integrators.
namespace kernels {

/// J_eta u in physical space.
VectorField advecting_velocity(const SpectralVector& u_hat, double eta, const Grid& g);

/// grad J_eta J_eta psi from the charge density coefficients.
VectorField mollified_potential_gradient(const SpectralField& rho_hat, const PhysParams& p, const Grid& g);

/// Pointwise 1/T. @throws TemperatureFloorViolated if min T < T*/2.
ScalarField reciprocal_temperature(const ScalarField& T, double T_star);

/// g (alpha_T (T - T_r) - alpha_S (S - S_r)).
ScalarField buoyancy_forcing(const ScalarField& T, const std::vector<ScalarField>& conc, const ReferenceValues& ref,
                             const PhysParams& p);

SpectralField nernst_planck(const ScalarField& c, double valence, const VectorField& advecting,
                            const ScalarField& inv_T, const VectorField& grad_psi_moll, const PhysParams& p,
                            const Grid& g);

SpectralField heat_transport(const ScalarField& T, const VectorField& advecting, const Grid& g);

/// Projected momentum forcing; the k=0 mode is zeroed.
SpectralVector momentum(const VectorField& u, const VectorField& advecting, const ScalarField& buoyancy,
                        const ScalarField& rho, const VectorField& grad_psi_moll, const PhysParams& p,
                        const Grid& g);

} // namespace kernels

} // namespace npb
