#include "npb/state.hpp"

#include "npb/errors.hpp"
#include "npb/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace npb {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) { return splitmix64(seed ^ splitmix64(stream)); }

// 53-bit uniform in [0,1); avoids implementation-defined distributions.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool in_band(const std::array<int, 3>& k, const Grid& g)
{
    const int cutoff = g.n() / 3;
    return std::abs(k[0]) <= cutoff && std::abs(k[1]) <= cutoff && std::abs(k[2]) <= cutoff;
}

void check_modes_in_band(const FieldSpec& spec, const Grid& g, const std::string& name)
{
    if (spec.kind == FieldSpec::Kind::SingleMode && !in_band(spec.wavevector, g)) {
        std::ostringstream msg;
        msg << name << ": wavevector (" << spec.wavevector[0] << "," << spec.wavevector[1] << ","
            << spec.wavevector[2] << ") lies outside the dealiased band |k_j| <= " << g.n() / 3;
        throw InvalidIC(msg.str());
    }
    for (const auto& part : spec.parts) {
        check_modes_in_band(part, g, name);
    }
}

ScalarField random_smooth(const Grid& g, double k0, std::uint64_t seed)
{
    if (!(k0 > 0.0)) {
        throw InvalidIC("random_smooth requires k0 > 0");
    }
    std::mt19937_64 rng(seed);
    auto spec = g.zero_spectrum();
    const auto k2 = g.k_squared();
    const auto mask = g.dealias_mask();
    for (std::size_t s = 1; s < spec.size(); ++s) {
        // Draw for every stored mode so the stream does not depend on the band.
        const double amp = uniform01(rng);
        const double phase = two_pi * uniform01(rng);
        if (mask[s]) {
            spec[s] = std::polar(amp * std::exp(-k2[s] / (k0 * k0)), phase);
        }
    }
    // c2r symmetrizes the k1=0 plane; a second pass makes the coefficients consistent.
    auto r = g.inverse(spec);
    auto r_hat = g.forward(r);
    r_hat[0] = 0.0;
    fourier::apply_dealias(r_hat, g);
    r = g.inverse(r_hat);
    const double peak = max_abs(r);
    if (peak > 0.0) {
        for (auto& v : r.values) {
            v /= peak;
        }
    }
    return r;
}

} // namespace

std::optional<std::string> PhysParams::check() const
{
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    auto nonneg = [](double v) { return v >= 0.0 && std::isfinite(v); };
    if (!positive(D)) return "physics.D must be > 0";
    if (!positive(nu)) return "physics.nu must be > 0";
    if (!positive(kappa)) return "physics.kappa must be > 0";
    if (!positive(epsilon)) return "physics.epsilon must be > 0";
    if (!positive(e_charge)) return "physics.e_charge must be > 0";
    if (!positive(k_B)) return "physics.k_B must be > 0";
    if (!positive(N_A)) return "physics.N_A must be > 0";
    if (!nonneg(g)) return "physics.g must be >= 0";
    if (!nonneg(alpha_T)) return "physics.alpha_T must be >= 0";
    if (!nonneg(alpha_S)) return "physics.alpha_S must be >= 0";
    if (!positive(T_star)) return "physics.T_star must be > 0";
    if (!nonneg(eta)) return "physics.eta must be >= 0";
    if (!positive(smallness_C)) return "physics.smallness_C must be > 0";
    if (valences.empty()) return "physics.valences must list at least one species";
    if (valences.size() != molar_masses.size()) {
        return "physics.valences and physics.molar_masses must have the same length";
    }
    for (double z : valences) {
        if (!std::isfinite(z)) return "physics.valences must be finite";
    }
    for (double m : molar_masses) {
        if (!positive(m)) return "physics.molar_masses must be > 0";
    }
    return std::nullopt;
}

ReferenceValues ReferenceValues::from_state(const SimState& s, const PhysParams& p)
{
    ReferenceValues ref;
    ref.T_r = mean(s.temperature);
    ref.S_r = 0.0;
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        const double m = mean(s.concentrations[i]);
        ref.concentration_means.push_back(m);
        ref.S_r += m * p.molar_masses[i];
    }
    return ref;
}

ScalarField ReferenceValues::salinity(const SimState& s, const PhysParams& p) const
{
    ScalarField S(s.temperature.size());
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        const double M = p.molar_masses[i];
        const auto& c = s.concentrations[i];
        for (std::size_t x = 0; x < S.size(); ++x) {
            S[x] += M * c[x];
        }
    }
    return S;
}

ScalarField ReferenceValues::buoyancy_density(const SimState& s, const PhysParams& p) const
{
    auto beta = salinity(s, p);
    for (std::size_t x = 0; x < beta.size(); ++x) {
        beta[x] = 1.0 - p.alpha_T * (s.temperature[x] - T_r) + p.alpha_S * (beta[x] - S_r);
    }
    return beta;
}

ScalarField charge_density(const std::vector<ScalarField>& conc, const PhysParams& p)
{
    ScalarField rho(conc.front().size());
    const double F = p.faraday();
    for (std::size_t i = 0; i < conc.size(); ++i) {
        const double q = F * p.valences[i];
        for (std::size_t x = 0; x < rho.size(); ++x) {
            rho[x] += q * conc[i][x];
        }
    }
    return rho;
}

ElectroFields compute_electro(const SimState& s, const PhysParams& p, const Grid& g)
{
    ElectroFields ef;
    ef.rho = charge_density(s.concentrations, p);
    ef.psi = poisson_solve(ef.rho, p.epsilon, g);
    auto phi_hat = g.forward(ef.psi);
    fourier::scale_by_mollifier(phi_hat, 2.0 * p.eta, g);
    for (int axis = 0; axis < 3; ++axis) {
        ef.grad_psi_moll[axis] = g.inverse(fourier::derivative(phi_hat, axis, g));
    }
    return ef;
}

double check_compatibility(const SimState& s, const PhysParams& p)
{
    double total = 0.0;
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        total += p.faraday() * p.valences[i] * mean(s.concentrations[i]);
    }
    return std::abs(total);
}

std::string ValidationReport::describe() const
{
    std::ostringstream out;
    for (const auto& v : violations) {
        switch (v.kind) {
        case Violation::Kind::NegativeConcentration:
            out << "NegativeConcentration(species " << v.species << ", min " << v.value << ") ";
            break;
        case Violation::Kind::TemperatureFloor:
            out << "TemperatureFloor(min " << v.value << ") ";
            break;
        case Violation::Kind::NonzeroMeanVelocity:
            out << "NonzeroMeanVelocity(axis " << v.species << ", mean " << v.value << ") ";
            break;
        }
    }
    auto text = out.str();
    if (!text.empty()) {
        text.pop_back();
    }
    return text;
}

ValidationReport validate_state(const SimState& s, const PhysParams& p, double tol)
{
    ValidationReport report;
    for (std::size_t i = 0; i < s.concentrations.size(); ++i) {
        const auto& c = s.concentrations[i];
        const double m = all_finite(c) ? min_value(c) : -std::numeric_limits<double>::infinity();
        if (!(m >= -tol)) {
            report.violations.push_back({Violation::Kind::NegativeConcentration, i + 1, m});
        }
    }
    const double tmin = all_finite(s.temperature) ? min_value(s.temperature) : -std::numeric_limits<double>::infinity();
    if (!(tmin >= p.T_star - tol)) {
        report.violations.push_back({Violation::Kind::TemperatureFloor, 0, tmin});
    }
    for (std::size_t axis = 0; axis < 3; ++axis) {
        const double m = mean(s.velocity[axis]);
        if (!(std::abs(m) <= tol)) {
            report.violations.push_back({Violation::Kind::NonzeroMeanVelocity, axis + 1, m});
        }
    }
    return report;
}

FieldSpec FieldSpec::constant(double v)
{
    FieldSpec f;
    f.kind = Kind::Constant;
    f.value = v;
    return f;
}

FieldSpec FieldSpec::single_mode(double base, double amplitude, std::array<int, 3> k, double phase)
{
    FieldSpec f;
    f.kind = Kind::SingleMode;
    f.base = base;
    f.amplitude = amplitude;
    f.wavevector = k;
    f.phase = phase;
    return f;
}

FieldSpec FieldSpec::random_smooth(double base, double amplitude, double k0)
{
    FieldSpec f;
    f.kind = Kind::RandomSmooth;
    f.base = base;
    f.amplitude = amplitude;
    f.k0 = k0;
    return f;
}

FieldSpec FieldSpec::sum(std::vector<FieldSpec> parts)
{
    FieldSpec f;
    f.kind = Kind::Sum;
    f.parts = std::move(parts);
    return f;
}

ScalarField realize_field(const FieldSpec& spec, const Grid& g, std::uint64_t seed)
{
    switch (spec.kind) {
    case FieldSpec::Kind::Constant:
        return g.constant(spec.value);
    case FieldSpec::Kind::SingleMode: {
        auto f = g.zeros();
        const auto& k = spec.wavevector;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto x = g.coordinate(i);
            const double arg = two_pi * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2]) + spec.phase;
            f[i] = spec.base + spec.amplitude * std::sin(arg);
        }
        return f;
    }
    case FieldSpec::Kind::RandomSmooth: {
        auto f = random_smooth(g, spec.k0, seed);
        for (auto& v : f.values) {
            v = spec.base + spec.amplitude * v;
        }
        return f;
    }
    case FieldSpec::Kind::Sum: {
        auto f = g.zeros();
        for (std::size_t j = 0; j < spec.parts.size(); ++j) {
            const auto part = realize_field(spec.parts[j], g, derive_seed(seed, j + 1));
            for (std::size_t i = 0; i < f.size(); ++i) {
                f[i] += part[i];
            }
        }
        return f;
    }
    }
    return g.zeros();
}

SimState make_initial_state(const InitialCondition& ic, const PhysParams& p, const Grid& g)
{
    if (auto err = p.check()) {
        throw InvalidIC(*err);
    }
    if (ic.concentrations.size() != p.species()) {
        throw InvalidIC("initial condition lists " + std::to_string(ic.concentrations.size()) +
                        " concentrations for " + std::to_string(p.species()) + " species");
    }

    auto finish = [&](ScalarField f) {
        auto f_hat = g.forward(f);
        fourier::apply_dealias(f_hat, g);
        if (ic.mollify) {
            fourier::scale_by_mollifier(f_hat, p.eta, g);
        }
        return f_hat;
    };

    SimState s;
    s.time = 0.0;
    for (std::size_t i = 0; i < p.species(); ++i) {
        const auto name = "c" + std::to_string(i + 1);
        check_modes_in_band(ic.concentrations[i], g, name);
        s.concentrations.push_back(g.inverse(finish(realize_field(ic.concentrations[i], g, derive_seed(ic.seed, 100 + i)))));
    }

    SpectralVector u_hat;
    for (int axis = 0; axis < 3; ++axis) {
        check_modes_in_band(ic.velocity[axis], g, "u" + std::to_string(axis + 1));
        u_hat[axis] = finish(realize_field(ic.velocity[axis], g, derive_seed(ic.seed, 200 + axis)));
    }
    fourier::apply_leray(u_hat, g);
    for (int axis = 0; axis < 3; ++axis) {
        s.velocity[axis] = g.inverse(u_hat[axis]);
    }

    check_modes_in_band(ic.temperature, g, "T");
    s.temperature = g.inverse(finish(realize_field(ic.temperature, g, derive_seed(ic.seed, 300))));

    for (const auto& c : s.concentrations) {
        if (!all_finite(c)) {
            throw InvalidIC("initial concentration is not finite");
        }
    }
    const auto report = validate_state(s, p, default_nonneg_tol);
    if (!report.ok()) {
        throw InvalidIC("initial state fails validation: " + report.describe());
    }

    double scale = 1.0;
    for (std::size_t i = 0; i < p.species(); ++i) {
        scale = std::max(scale, std::abs(p.faraday() * p.valences[i] * mean(s.concentrations[i])));
    }
    const double residual = check_compatibility(s, p);
    if (residual > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "initial concentrations violate electroneutrality: |sum e N_A z_i mean(c_i)| = " << residual;
        throw InvalidIC(msg.str());
    }
    return s;
}

} // namespace npb
