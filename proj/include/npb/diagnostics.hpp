/// @file diagnostics.hpp
/// @brief Entropy, energy and dissipation functionals, the inequalities built
///        on them, and exponential decay fits.

#pragma once

#include "npb/grid.hpp"
#include "npb/state.hpp"

#include <utility>
#include <vector>

namespace npb {

/// Integral of c log(c/cbar) over the unit torus. Values below 0 are
/// evaluated as 0, with 0 log 0 = 0.
/// @throws InvalidMean if cbar <= 0.
double entropy(const ScalarField& c, double cbar);

/// eps ||grad J_eta psi||^2 + ||u||^2 + 2 k_B N_A T* sum_i E_i, with E_i
/// measured against the means in @p ref.
double energy_calE(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref, const PhysParams& p,
                   const Grid& g);

/// (2D/eps) ||J_eta rho||^2 + nu ||grad u||^2 + (D k_B N_A T*/2) sum_i ||grad sqrt(c_i)||^2.
double dissipation_calD(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g);

/// 2 cbar entropy(c, cbar) - ||c - cbar||_1^2; nonnegative when the
/// Csiszar-Kullback-Pinsker bound holds.
/// @throws InvalidMean if cbar <= 0.
double ckp_check(const ScalarField& c, double cbar);

struct LlogLCheck {
    double lhs = 0.0; ///< integral of J_eta f log J_eta f
    double rhs = 0.0; ///< integral of f log f
};

LlogLCheck llogl_mollifier_check(const ScalarField& f, double eta, const Grid& g);

/// |<J u . grad rho, J J psi> + <rho grad J J psi, J u>| relative to
/// ||u|| ||rho|| ||grad J J psi||.
double cancellation_residual(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g);

struct DecayFit {
    double rate = 0.0;
    double amplitude = 0.0;
    double r_squared = 0.0;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Least-squares line through (t, log y) for samples with t in [t_start, t_end].
/// @throws InsufficientSamples if fewer than 8 samples fall in the window.
/// @throws NonPositiveSample if any windowed y <= 0.
DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double t_start, double t_end);

struct SmallnessCheck {
    double threshold = 0.0; ///< infinite when alpha_S = 0
    bool pass = false;
};

/// threshold = D k_B N_A T* nu / (4 C alpha_S^2); pass iff max mean <= threshold.
SmallnessCheck smallness_check(const PhysParams& p, const std::vector<double>& initial_means);

/// Signed terms of the energy identity d calE/dt = -dissipation + forcing.
struct EnergyBudget {
    double dissipation = 0.0; ///< electric, viscous, Joule-like and entropy production terms
    double forcing = 0.0;     ///< 2 integral of the buoyancy times u_3
    double rate() const { return forcing - dissipation; }
};

/// Evaluates the production terms of d calE/dt at state @p s:
///   dissipation = (2D/eps)||J rho||^2 + 2 nu ||grad u||^2
///               + 2 D (e^2 N_A / k_B) sum z_i^2 int c_i |grad J J psi|^2 / T
///               + 2 k_B N_A T* D sum int (grad c_i + a_i) . grad c_i / c_i,
///   a_i = (e/k_B) z_i c_i grad J J psi / T.
EnergyBudget energy_budget(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref,
                           const PhysParams& p, const Grid& g);

struct DiagnosticsRecord {
    double time = 0.0;
    double entropy_E = 0.0;
    double energy_calE = 0.0;
    double dissipation_D = 0.0;
    double temp_L2_dev = 0.0;
    double u_L2 = 0.0;
    double cancellation_residual = 0.0;
    double ckp_margin = 0.0;
    double min_T = 0.0;
    std::vector<double> min_c;
    std::vector<double> conc_L1_dev;

    bool operator==(const DiagnosticsRecord&) const = default;
};

/// All functionals at one instant; ckp_margin is the smallest over species.
DiagnosticsRecord diagnose(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g);

} // namespace npb
