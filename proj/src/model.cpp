#include "npb/model.hpp"

#include "npb/errors.hpp"
#include "npb/spectral.hpp"

#include <sstream>

namespace npb {

namespace kernels {

VectorField advecting_velocity(const SpectralVector& u_hat, double eta, const Grid& g)
{
    VectorField w;
    for (int axis = 0; axis < 3; ++axis) {
        auto tmp = u_hat[axis];
        fourier::scale_by_mollifier(tmp, eta, g);
        w[axis] = g.inverse(tmp);
    }
    return w;
}

VectorField mollified_potential_gradient(const SpectralField& rho_hat, const PhysParams& p, const Grid& g)
{
    auto phi_hat = fourier::invert_poisson(rho_hat, p.epsilon, g);
    fourier::scale_by_mollifier(phi_hat, 2.0 * p.eta, g);
    VectorField grad;
    for (int axis = 0; axis < 3; ++axis) {
        grad[axis] = g.inverse(fourier::derivative(phi_hat, axis, g));
    }
    return grad;
}

ScalarField reciprocal_temperature(const ScalarField& T, double T_star)
{
    const double floor = 0.5 * T_star;
    ScalarField inv(T.size());
    for (std::size_t x = 0; x < T.size(); ++x) {
        if (!(T[x] >= floor)) {
            std::ostringstream msg;
            msg << "temperature " << T[x] << " below T*/2 = " << floor;
            throw TemperatureFloorViolated(msg.str());
        }
        inv[x] = 1.0 / T[x];
    }
    return inv;
}

ScalarField buoyancy_forcing(const ScalarField& T, const std::vector<ScalarField>& conc, const ReferenceValues& ref,
                             const PhysParams& p)
{
    ScalarField b(T.size());
    for (std::size_t x = 0; x < T.size(); ++x) {
        double S = 0.0;
        for (std::size_t i = 0; i < conc.size(); ++i) {
            S += conc[i][x] * p.molar_masses[i];
        }
        b[x] = p.g * (p.alpha_T * (T[x] - ref.T_r) - p.alpha_S * (S - ref.S_r));
    }
    return b;
}

SpectralField nernst_planck(const ScalarField& c, double valence, const VectorField& advecting,
                            const ScalarField& inv_T, const VectorField& grad_psi_moll, const PhysParams& p,
                            const Grid& g)
{
    const double migration = p.D * p.e_charge / p.k_B * valence;
    auto acc = g.zero_spectrum();
    auto flux_hat = g.zero_spectrum();
    ScalarField flux(g.size());
    for (int axis = 0; axis < 3; ++axis) {
        const auto& w = advecting[axis];
        const auto& dphi = grad_psi_moll[axis];
        for (std::size_t x = 0; x < flux.size(); ++x) {
            flux[x] = c[x] * (migration * inv_T[x] * dphi[x] - w[x]);
        }
        g.forward(flux.values, flux_hat);
        fourier::accumulate_derivative(acc, flux_hat, axis, g);
    }
    fourier::apply_dealias(acc, g);
    return acc;
}

SpectralField heat_transport(const ScalarField& T, const VectorField& advecting, const Grid& g)
{
    auto acc = g.zero_spectrum();
    auto flux_hat = g.zero_spectrum();
    ScalarField flux(g.size());
    for (int axis = 0; axis < 3; ++axis) {
        const auto& w = advecting[axis];
        for (std::size_t x = 0; x < flux.size(); ++x) {
            flux[x] = -w[x] * T[x];
        }
        g.forward(flux.values, flux_hat);
        fourier::accumulate_derivative(acc, flux_hat, axis, g);
    }
    fourier::apply_dealias(acc, g);
    return acc;
}

SpectralVector momentum(const VectorField& u, const VectorField& advecting, const ScalarField& buoyancy,
                        const ScalarField& rho, const VectorField& grad_psi_moll, const PhysParams& p,
                        const Grid& g)
{
    SpectralVector acc{g.zero_spectrum(), g.zero_spectrum(), g.zero_spectrum()};
    auto work_hat = g.zero_spectrum();
    ScalarField work(g.size());

    // -(w . grad) u = -div(w (x) u) since div w = 0.
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const auto& wj = advecting[j];
            const auto& ui = u[i];
            for (std::size_t x = 0; x < work.size(); ++x) {
                work[x] = -wj[x] * ui[x];
            }
            g.forward(work.values, work_hat);
            fourier::accumulate_derivative(acc[i], work_hat, j, g);
        }
    }

    // -J(rho grad J J psi)
    for (int i = 0; i < 3; ++i) {
        const auto& dphi = grad_psi_moll[i];
        for (std::size_t x = 0; x < work.size(); ++x) {
            work[x] = rho[x] * dphi[x];
        }
        g.forward(work.values, work_hat);
        fourier::scale_by_mollifier(work_hat, p.eta, g);
        fourier::axpy(acc[i], -1.0, work_hat);
    }

    g.forward(buoyancy.values, work_hat);
    fourier::axpy(acc[2], 1.0, work_hat);

    for (auto& a : acc) {
        fourier::apply_dealias(a, g);
    }
    fourier::apply_leray(acc, g);
    for (auto& a : acc) {
        a[0] = 0.0;
    }
    return acc;
}

} // namespace kernels

namespace {

SpectralVector velocity_hat(const VectorField& u, const Grid& g)
{
    return {g.forward(u[0]), g.forward(u[1]), g.forward(u[2])};
}

} // namespace

std::vector<ScalarField> np_rhs(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g)
{
    const auto w = kernels::advecting_velocity(velocity_hat(s.velocity, g), p.eta, g);
    const auto inv_T = kernels::reciprocal_temperature(s.temperature, p.T_star);
    std::vector<ScalarField> out;
    out.reserve(s.concentrations.size());
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        out.push_back(g.inverse(
            kernels::nernst_planck(s.concentrations[i], p.valences[i], w, inv_T, ef.grad_psi_moll, p, g)));
    }
    return out;
}

VectorField momentum_rhs(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref, const PhysParams& p,
                         const Grid& g)
{
    const auto w = kernels::advecting_velocity(velocity_hat(s.velocity, g), p.eta, g);
    const auto b = kernels::buoyancy_forcing(s.temperature, s.concentrations, ref, p);
    const auto rhs = kernels::momentum(s.velocity, w, b, ef.rho, ef.grad_psi_moll, p, g);
    return {g.inverse(rhs[0]), g.inverse(rhs[1]), g.inverse(rhs[2])};
}

ScalarField temperature_rhs(const SimState& s, const PhysParams& p, const Grid& g)
{
    const auto w = kernels::advecting_velocity(velocity_hat(s.velocity, g), p.eta, g);
    return g.inverse(kernels::heat_transport(s.temperature, w, g));
}

SpectralState to_spectral(const SimState& s, const Grid& g)
{
    SpectralState hat;
    hat.concentrations.reserve(s.concentrations.size());
    for (const auto& c : s.concentrations) {
        hat.concentrations.push_back(g.forward(c));
    }
    hat.velocity = velocity_hat(s.velocity, g);
    hat.temperature = g.forward(s.temperature);
    return hat;
}

SimState to_physical(const SpectralState& hat, double time, const Grid& g)
{
    SimState s;
    s.time = time;
    s.concentrations.reserve(hat.concentrations.size());
    for (const auto& c : hat.concentrations) {
        s.concentrations.push_back(g.inverse(c));
    }
    for (int axis = 0; axis < 3; ++axis) {
        s.velocity[axis] = g.inverse(hat.velocity[axis]);
    }
    s.temperature = g.inverse(hat.temperature);
    return s;
}

SpectralState full_rhs(const SimState& phys, const SpectralState& hat, const ReferenceValues& ref,
                       const PhysParams& p, const Grid& g)
{
    auto rho_hat = g.zero_spectrum();
    for (std::size_t i = 0; i < hat.concentrations.size(); ++i) {
        fourier::axpy(rho_hat, p.faraday() * p.valences[i], hat.concentrations[i]);
    }
    const auto grad_phi = kernels::mollified_potential_gradient(rho_hat, p, g);
    const auto rho = charge_density(phys.concentrations, p);
    const auto w = kernels::advecting_velocity(hat.velocity, p.eta, g);
    const auto inv_T = kernels::reciprocal_temperature(phys.temperature, p.T_star);

    SpectralState out;
    out.concentrations.reserve(hat.concentrations.size());
    for (std::size_t i = 0; i < hat.concentrations.size(); ++i) {
        out.concentrations.push_back(
            kernels::nernst_planck(phys.concentrations[i], p.valences[i], w, inv_T, grad_phi, p, g));
    }
    const auto b = kernels::buoyancy_forcing(phys.temperature, phys.concentrations, ref, p);
    out.velocity = kernels::momentum(phys.velocity, w, b, rho, grad_phi, p, g);
    out.temperature = kernels::heat_transport(phys.temperature, w, g);
    return out;
}

} // namespace npb
