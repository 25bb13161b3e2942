/// @file state.hpp
/// @brief Physical parameters, prognostic state, derived electric fields and
///        the structural checks (positivity, temperature floor, neutrality).

#pragma once

#include "npb/grid.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace npb {

/// Default admissible undershoot below 0 (concentrations) or T* (temperature).
inline constexpr double default_nonneg_tol = 1e-8;

/// Physical constants and model coefficients. Defaults are nondimensional.
struct PhysParams {
    double D = 1.0;       ///< ionic diffusivity (shared by all species)
    double nu = 1.0;      ///< kinematic viscosity
    double kappa = 1.0;   ///< thermal diffusivity
    double epsilon = 1.0; ///< dielectric permittivity
    double e_charge = 1.0;
    double k_B = 1.0;
    double N_A = 1.0;
    double g = 0.0;
    double alpha_T = 0.0;
    double alpha_S = 0.0;
    std::vector<double> valences{1.0, -1.0};
    std::vector<double> molar_masses{1.0, 1.0};
    double T_star = 1.0; ///< temperature floor
    double eta = 0.0;    ///< mollification strength; 0 is the unmollified system
    double smallness_C = 1.0;

    std::size_t species() const { return valences.size(); }
    double faraday() const { return e_charge * N_A; }
    double gas_constant() const { return k_B * N_A; }

    /// First violated constraint, phrased with its config key, or nullopt.
    std::optional<std::string> check() const;
};

/// Prognostic fields at one instant.
struct SimState {
    double time = 0.0;
    std::vector<ScalarField> concentrations;
    VectorField velocity;
    ScalarField temperature;

    bool operator==(const SimState&) const = default;
};

/// Charge density, potential and the doubly mollified potential gradient.
struct ElectroFields {
    ScalarField rho;
    ScalarField psi;
    VectorField grad_psi_moll;
};

/// Reference temperature and salinity, frozen from the initial state.
struct ReferenceValues {
    double T_r = 0.0;
    double S_r = 0.0;
    std::vector<double> concentration_means;

    static ReferenceValues from_state(const SimState& s, const PhysParams& p);

    /// S = sum_i c_i M_i.
    ScalarField salinity(const SimState& s, const PhysParams& p) const;
    /// beta = 1 - alpha_T (T - T_r) + alpha_S (S - S_r).
    ScalarField buoyancy_density(const SimState& s, const PhysParams& p) const;
};

/// rho = e N_A sum z_i c_i.
ScalarField charge_density(const std::vector<ScalarField>& conc, const PhysParams& p);

/// @throws NonNeutralSource when the concentrations are not electroneutral on average.
ElectroFields compute_electro(const SimState& s, const PhysParams& p, const Grid& g);

/// |sum_i e N_A z_i mean(c_i)|.
double check_compatibility(const SimState& s, const PhysParams& p);

struct Violation {
    enum class Kind { NegativeConcentration, TemperatureFloor, NonzeroMeanVelocity };
    Kind kind;
    std::size_t species = 0; ///< 1-based species for NegativeConcentration, axis for velocity
    double value = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    std::string describe() const;
};

ValidationReport validate_state(const SimState& s, const PhysParams& p, double tol = default_nonneg_tol);

// --- initial conditions -------------------------------------------------------

/// Description of one initial field.
///
/// constant:      value
/// single_mode:   base + amplitude * sin(2 pi k.x + phase)
/// random_smooth: base + amplitude * r(x), r a seeded field with spectrum
///                exp(-|k|^2/k0^2), zero mean, scaled to max|r| = 1
/// sum:           sum of the parts
struct FieldSpec {
    enum class Kind { Constant, SingleMode, RandomSmooth, Sum };
    Kind kind = Kind::Constant;
    double value = 0.0;
    double base = 0.0;
    double amplitude = 0.0;
    std::array<int, 3> wavevector{1, 0, 0};
    double phase = 0.0;
    double k0 = 2.0;
    std::vector<FieldSpec> parts;

    static FieldSpec constant(double v);
    static FieldSpec single_mode(double base, double amplitude, std::array<int, 3> k, double phase = 0.0);
    static FieldSpec random_smooth(double base, double amplitude, double k0);
    static FieldSpec sum(std::vector<FieldSpec> parts);
};

struct InitialCondition {
    std::vector<FieldSpec> concentrations;
    std::array<FieldSpec, 3> velocity{FieldSpec::constant(0.0), FieldSpec::constant(0.0), FieldSpec::constant(0.0)};
    FieldSpec temperature = FieldSpec::constant(1.0);
    std::uint64_t seed = 0;
    /// Apply J_eta to every initial field, as in the regularized scheme.
    bool mollify = false;
};

/// Builds a dealiased state; the velocity is Leray-projected.
/// @throws InvalidIC when positivity, the temperature floor, the zero mean
///         velocity or electroneutrality fails, or a mode is outside the
///         dealiased band.
SimState make_initial_state(const InitialCondition& ic, const PhysParams& p, const Grid& g);

/// Realizes one field description on the grid (no validation).
ScalarField realize_field(const FieldSpec& spec, const Grid& g, std::uint64_t seed);

} // namespace npb
