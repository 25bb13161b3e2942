#include "npb/diagnostics.hpp"

#include "npb/errors.hpp"
#include "npb/model.hpp"
#include "npb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace npb {

namespace {

/// x log x - x + 1 at x = 1 + d, accurate near d = 0.
double relative_entropy_density(double d)
{
    if (std::abs(d) < 1e-2) {
        // sum_{k>=2} (-1)^k d^k / (k (k-1))
        double term = d * d;
        double sum = 0.0;
        for (int k = 2; k <= 9; ++k) {
            sum += (k % 2 == 0 ? 1.0 : -1.0) * term / (k * (k - 1));
            term *= d;
        }
        return sum;
    }
    const double x = 1.0 + d;
    return x == 0.0 ? 1.0 : std::max(0.0, x * std::log(x) - d);
}

void require_mean(double cbar)
{
    if (!(cbar > 0.0)) {
        std::ostringstream msg;
        msg << "reference mean must be > 0, got " << cbar;
        throw InvalidMean(msg.str());
    }
}

double x_log_x_integral(const ScalarField& f)
{
    double sum = 0.0;
    for (double v : f.values) {
        if (v > 0.0) {
            sum += v * std::log(v);
        }
    }
    return sum / static_cast<double>(f.size());
}

SpectralVector velocity_hat(const VectorField& u, const Grid& g)
{
    return {g.forward(u[0]), g.forward(u[1]), g.forward(u[2])};
}

} // namespace

double entropy(const ScalarField& c, double cbar)
{
    require_mean(cbar);
    // c log(c/cbar) = cbar h(c/cbar) + (c - cbar), h(x) = x log x - x + 1 >= 0.
    double h_sum = 0.0;
    ScalarField clipped(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        clipped[i] = std::max(c[i], 0.0);
        h_sum += relative_entropy_density(clipped[i] / cbar - 1.0);
    }
    return cbar * h_sum / static_cast<double>(c.size()) + (mean(clipped) - cbar);
}

double energy_calE(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref, const PhysParams& p,
                   const Grid& g)
{
    auto psi_hat = g.forward(ef.psi);
    fourier::scale_by_mollifier(psi_hat, p.eta, g);
    double E = 0.0;
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        E += entropy(s.concentrations[i], ref.concentration_means[i]);
    }
    const double u2 = inner(s.velocity, s.velocity);
    return p.epsilon * fourier::gradient_norm2(psi_hat, g) + u2 + 2.0 * p.gas_constant() * p.T_star * E;
}

double dissipation_calD(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g)
{
    auto rho_hat = g.forward(ef.rho);
    fourier::scale_by_mollifier(rho_hat, p.eta, g);
    double grad_u = 0.0;
    for (const auto& u : s.velocity) {
        grad_u += fourier::gradient_norm2(g.forward(u), g);
    }
    double grad_sqrt_c = 0.0;
    ScalarField root(g.size());
    for (const auto& c : s.concentrations) {
        for (std::size_t x = 0; x < root.size(); ++x) {
            root[x] = std::sqrt(std::max(c[x], 0.0));
        }
        grad_sqrt_c += fourier::gradient_norm2(g.forward(root), g);
    }
    return 2.0 * p.D / p.epsilon * fourier::norm2(rho_hat, g) + p.nu * grad_u
           + 0.5 * p.D * p.gas_constant() * p.T_star * grad_sqrt_c;
}

double ckp_check(const ScalarField& c, double cbar)
{
    require_mean(cbar);
    double l1 = 0.0;
    for (double v : c.values) {
        l1 += std::abs(v - cbar);
    }
    l1 /= static_cast<double>(c.size());
    return 2.0 * cbar * entropy(c, cbar) - l1 * l1;
}

LlogLCheck llogl_mollifier_check(const ScalarField& f, double eta, const Grid& g)
{
    const auto jf = mollify(f, eta, g);
    return {x_log_x_integral(jf), x_log_x_integral(f)};
}

double cancellation_residual(const SimState& s, const ElectroFields& ef, const PhysParams& p, const Grid& g)
{
    // All factors are taken on the 2/3 band, where the grid sum of a triple product is exact.
    // Rounding noise in rho once the charge has relaxed would otherwise alias.
    auto w = kernels::advecting_velocity(velocity_hat(s.velocity, g), p.eta, g);
    for (auto& c : w) c = dealias(c, g);
    const auto rho = dealias(ef.rho, g);
    const auto grad_rho = gradient(rho, g);
    const auto potential = dealias(mollify(ef.psi, 2.0 * p.eta, g), g);
    const auto grad_potential = gradient(potential, g);

    double transport = 0.0;
    double force = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
        double w_grad_rho = 0.0;
        double w_grad_psi = 0.0;
        for (int a = 0; a < 3; ++a) {
            w_grad_rho += w[a][x] * grad_rho[a][x];
            w_grad_psi += w[a][x] * grad_potential[a][x];
        }
        transport += w_grad_rho * potential[x];
        force += rho[x] * w_grad_psi;
    }
    const double inv = 1.0 / static_cast<double>(g.size());
    const double scale = norm_l2(s.velocity) * norm_l2(rho) * norm_l2(grad_potential);
    return std::abs((transport + force) * inv) / (scale + std::numeric_limits<double>::min());
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series, double t_start, double t_end)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& [t, y] : series) {
        if (t < t_start || t > t_end) continue;
        if (!(y > 0.0)) {
            std::ostringstream msg;
            msg << "sample at t=" << t << " is not positive (" << y << ")";
            throw NonPositiveSample(msg.str());
        }
        pts.emplace_back(t, std::log(y));
    }
    if (pts.size() < 8) {
        throw InsufficientSamples("decay fit needs at least 8 samples in the window, got " +
                                  std::to_string(pts.size()));
    }
    const double m = static_cast<double>(pts.size());
    double t_mean = 0.0;
    double l_mean = 0.0;
    for (const auto& [t, l] : pts) {
        t_mean += t;
        l_mean += l;
    }
    t_mean /= m;
    l_mean /= m;
    double stt = 0.0;
    double stl = 0.0;
    double sll = 0.0;
    for (const auto& [t, l] : pts) {
        stt += (t - t_mean) * (t - t_mean);
        stl += (t - t_mean) * (l - l_mean);
        sll += (l - l_mean) * (l - l_mean);
    }
    if (!(stt > 0.0)) {
        throw InsufficientSamples("decay fit window holds a single distinct time");
    }
    const double slope = stl / stt;
    const double intercept = l_mean - slope * t_mean;

    DecayFit fit;
    fit.rate = -slope;
    fit.amplitude = std::exp(intercept);
    if (sll > 0.0) {
        double ss_res = 0.0;
        for (const auto& [t, l] : pts) {
            const double r = l - (intercept + slope * t);
            ss_res += r * r;
        }
        fit.r_squared = std::clamp(1.0 - ss_res / sll, 0.0, 1.0);
    } else {
        fit.r_squared = 1.0;
    }
    fit.t_start = pts.front().first;
    fit.t_end = pts.back().first;
    return fit;
}

SmallnessCheck smallness_check(const PhysParams& p, const std::vector<double>& initial_means)
{
    SmallnessCheck out;
    if (p.alpha_S == 0.0) {
        out.threshold = std::numeric_limits<double>::infinity();
    } else {
        out.threshold =
            p.D * p.gas_constant() * p.T_star * p.nu / (4.0 * p.smallness_C * p.alpha_S * p.alpha_S);
    }
    double worst = -std::numeric_limits<double>::infinity();
    for (double m : initial_means) {
        worst = std::max(worst, m);
    }
    out.pass = worst <= out.threshold;
    return out;
}

EnergyBudget energy_budget(const SimState& s, const ElectroFields& ef, const ReferenceValues& ref,
                           const PhysParams& p, const Grid& g)
{
    auto rho_hat = g.forward(ef.rho);
    fourier::scale_by_mollifier(rho_hat, p.eta, g);
    double grad_u = 0.0;
    for (const auto& u : s.velocity) {
        grad_u += fourier::gradient_norm2(g.forward(u), g);
    }
    const auto inv_T = kernels::reciprocal_temperature(s.temperature, p.T_star);
    const auto& dphi = ef.grad_psi_moll;
    const double n_pts = static_cast<double>(g.size());

    double joule = 0.0;
    double production = 0.0;
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        const auto& c = s.concentrations[i];
        const double z = p.valences[i];
        const auto grad_c = gradient(c, g);
        double j_sum = 0.0;
        double p_sum = 0.0;
        for (std::size_t x = 0; x < g.size(); ++x) {
            double dphi2 = 0.0;
            double gc2 = 0.0;
            double cross = 0.0;
            for (int a = 0; a < 3; ++a) {
                dphi2 += dphi[a][x] * dphi[a][x];
                gc2 += grad_c[a][x] * grad_c[a][x];
                cross += dphi[a][x] * grad_c[a][x];
            }
            j_sum += c[x] * inv_T[x] * dphi2;
            p_sum += gc2 / c[x] + p.e_charge / p.k_B * z * inv_T[x] * cross;
        }
        joule += z * z * j_sum / n_pts;
        production += p_sum / n_pts;
    }

    const auto b = kernels::buoyancy_forcing(s.temperature, s.concentrations, ref, p);
    EnergyBudget out;
    out.dissipation = 2.0 * p.D / p.epsilon * fourier::norm2(rho_hat, g) + 2.0 * p.nu * grad_u
                      + 2.0 * p.D * p.e_charge * p.e_charge * p.N_A / p.k_B * joule
                      + 2.0 * p.gas_constant() * p.T_star * p.D * production;
    out.forcing = 2.0 * inner(b, s.velocity[2]);
    return out;
}

DiagnosticsRecord diagnose(const SimState& s, const ReferenceValues& ref, const PhysParams& p, const Grid& g)
{
    const auto ef = compute_electro(s, p, g);
    DiagnosticsRecord r;
    r.time = s.time;
    r.ckp_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        const auto& c = s.concentrations[i];
        const double cbar = ref.concentration_means[i];
        r.entropy_E += entropy(c, cbar);
        r.ckp_margin = std::min(r.ckp_margin, ckp_check(c, cbar));
        r.min_c.push_back(min_value(c));
        double l1 = 0.0;
        for (double v : c.values) {
            l1 += std::abs(v - cbar);
        }
        r.conc_L1_dev.push_back(l1 / static_cast<double>(c.size()));
    }
    if (s.concentrations.empty()) {
        r.ckp_margin = 0.0;
    }
    r.energy_calE = energy_calE(s, ef, ref, p, g);
    r.dissipation_D = dissipation_calD(s, ef, p, g);
    double dev2 = 0.0;
    for (double v : s.temperature.values) {
        dev2 += (v - ref.T_r) * (v - ref.T_r);
    }
    r.temp_L2_dev = std::sqrt(dev2 / static_cast<double>(s.temperature.size()));
    r.u_L2 = norm_l2(s.velocity);
    r.cancellation_residual = cancellation_residual(s, ef, p, g);
    r.min_T = min_value(s.temperature);
    return r;
}

} // namespace npb
