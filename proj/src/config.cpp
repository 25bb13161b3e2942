#include "npb/config.hpp"

#include "npb/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace npb {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        out.push_back(trim(item));
    }
    return out;
}

class KeyTable {
public:
    void insert(const std::string& key, const std::string& value, int line)
    {
        if (!entries_.emplace(key, value).second) {
            throw ConfigError(key + ": repeated on line " + std::to_string(line));
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    bool has_prefix(const std::string& prefix) const
    {
        const auto it = entries_.lower_bound(prefix + ".");
        return it != entries_.end() && it->first.rfind(prefix + ".", 0) == 0;
    }

    const std::string* take(const std::string& key)
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void real(const std::string& key, double& out)
    {
        if (const auto* v = take(key)) out = parse_real(key, *v);
    }

    void count(const std::string& key, std::size_t& out)
    {
        if (const auto* v = take(key)) out = static_cast<std::size_t>(parse_u64(key, *v));
    }

    void integer(const std::string& key, int& out)
    {
        if (const auto* v = take(key)) {
            const auto u = parse_u64(key, *v);
            if (u > 1u << 20) throw ConfigError(key + ": value out of range");
            out = static_cast<int>(u);
        }
    }

    void u64(const std::string& key, std::uint64_t& out)
    {
        if (const auto* v = take(key)) out = parse_u64(key, *v);
    }

    void boolean(const std::string& key, bool& out)
    {
        if (const auto* v = take(key)) {
            if (*v == "true" || *v == "1") {
                out = true;
            } else if (*v == "false" || *v == "0") {
                out = false;
            } else {
                throw ConfigError(key + ": expected true or false, got '" + *v + "'");
            }
        }
    }

    void reals(const std::string& key, std::vector<double>& out)
    {
        if (const auto* v = take(key)) {
            out.clear();
            for (const auto& item : split_list(*v)) {
                out.push_back(parse_real(key, item));
            }
        }
    }

    void reject_unused() const
    {
        for (const auto& [key, value] : entries_) {
            if (!used_.count(key)) {
                throw ConfigError(key + ": unknown key");
            }
        }
    }

    static double parse_real(const std::string& key, const std::string& text)
    {
        double v = 0.0;
        const auto* end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, v);
        if (text.empty() || res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
            throw ConfigError(key + ": expected a real number, got '" + text + "'");
        }
        return v;
    }

    static std::uint64_t parse_u64(const std::string& key, const std::string& text)
    {
        std::uint64_t v = 0;
        const auto* end = text.data() + text.size();
        const auto res = std::from_chars(text.data(), end, v);
        if (text.empty() || res.ec != std::errc() || res.ptr != end) {
            throw ConfigError(key + ": expected a nonnegative integer, got '" + text + "'");
        }
        return v;
    }

private:
    std::map<std::string, std::string> entries_;
    std::set<std::string> used_;
};

FieldSpec parse_field(KeyTable& keys, const std::string& prefix, const FieldSpec& fallback)
{
    if (!keys.has_prefix(prefix)) {
        return fallback;
    }
    const auto* kind = keys.take(prefix + ".kind");
    if (!kind) {
        throw ConfigError(prefix + ".kind: required when other " + prefix + ".* keys are given");
    }
    FieldSpec spec;
    if (*kind == "constant") {
        spec.kind = FieldSpec::Kind::Constant;
        keys.real(prefix + ".value", spec.value);
    } else if (*kind == "single_mode") {
        spec.kind = FieldSpec::Kind::SingleMode;
        keys.real(prefix + ".base", spec.base);
        keys.real(prefix + ".amplitude", spec.amplitude);
        keys.real(prefix + ".phase", spec.phase);
        if (const auto* wv = keys.take(prefix + ".wavevector")) {
            const auto items = split_list(*wv);
            if (items.size() != 3) {
                throw ConfigError(prefix + ".wavevector: expected three integers");
            }
            for (int a = 0; a < 3; ++a) {
                int k = 0;
                const auto& t = items[a];
                const auto res = std::from_chars(t.data(), t.data() + t.size(), k);
                if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
                    throw ConfigError(prefix + ".wavevector: expected three integers");
                }
                spec.wavevector[a] = k;
            }
        }
    } else if (*kind == "random_smooth") {
        spec.kind = FieldSpec::Kind::RandomSmooth;
        keys.real(prefix + ".base", spec.base);
        keys.real(prefix + ".amplitude", spec.amplitude);
        keys.real(prefix + ".k0", spec.k0);
        if (!(spec.k0 > 0.0)) {
            throw ConfigError(prefix + ".k0 must be > 0");
        }
    } else if (*kind == "sum") {
        spec.kind = FieldSpec::Kind::Sum;
        const auto* parts = keys.take(prefix + ".parts");
        if (!parts) {
            throw ConfigError(prefix + ".parts: required for kind = sum");
        }
        for (const auto& name : split_list(*parts)) {
            if (name.empty() || name.find('.') != std::string::npos) {
                throw ConfigError(prefix + ".parts: invalid part name '" + name + "'");
            }
            const auto part_prefix = prefix + "." + name;
            if (!keys.has(part_prefix + ".kind")) {
                throw ConfigError(part_prefix + ".kind: missing for listed part");
            }
            spec.parts.push_back(parse_field(keys, part_prefix, fallback));
        }
    } else {
        throw ConfigError(prefix + ".kind: unknown kind '" + *kind +
                          "' (expected constant, single_mode, random_smooth or sum)");
    }
    return spec;
}

} // namespace

void validate_config(const RunConfig& cfg)
{
    if (cfg.n < 8 || cfg.n % 2 != 0) {
        throw ConfigError("grid.n must be even and >= 8");
    }
    if (auto err = cfg.physics.check()) {
        throw ConfigError(*err);
    }
    if (auto err = cfg.time.check()) {
        throw ConfigError(*err);
    }
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) {
        throw ConfigError("time.t_end must be >= 0");
    }
    if (cfg.output.every < 1) {
        throw ConfigError("output.every must be >= 1");
    }
    if (cfg.study.eta_ladder.empty()) {
        throw ConfigError("study.eta_ladder must list at least one value");
    }
    for (double eta : cfg.study.eta_ladder) {
        if (!(eta >= 0.0)) throw ConfigError("study.eta_ladder values must be >= 0");
    }
    if (!(cfg.study.fit_skip >= 0.0 && cfg.study.fit_skip < 1.0)) {
        throw ConfigError("study.fit_skip must lie in [0, 1)");
    }
    if (cfg.ic.concentrations.size() != cfg.physics.species()) {
        throw ConfigError("ic: expected one concentration field per species");
    }
}

RunConfig parse_config_text(const std::string& text)
{
    KeyTable keys;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const auto line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        keys.insert(key, value, line_no);
    }

    RunConfig cfg;
    keys.integer("grid.n", cfg.n);

    auto& p = cfg.physics;
    keys.real("physics.D", p.D);
    keys.real("physics.nu", p.nu);
    keys.real("physics.kappa", p.kappa);
    keys.real("physics.epsilon", p.epsilon);
    keys.real("physics.e_charge", p.e_charge);
    keys.real("physics.k_B", p.k_B);
    keys.real("physics.N_A", p.N_A);
    keys.real("physics.g", p.g);
    keys.real("physics.alpha_T", p.alpha_T);
    keys.real("physics.alpha_S", p.alpha_S);
    keys.reals("physics.valences", p.valences);
    keys.reals("physics.molar_masses", p.molar_masses);
    keys.real("physics.T_star", p.T_star);
    keys.real("physics.eta", p.eta);
    keys.real("physics.smallness_C", p.smallness_C);
    if (auto err = p.check()) {
        throw ConfigError(*err);
    }

    auto& t = cfg.time;
    keys.real("time.dt", t.dt);
    t.dt_min = t.dt;
    t.dt_max = t.dt;
    keys.real("time.dt_min", t.dt_min);
    keys.real("time.dt_max", t.dt_max);
    keys.real("time.cfl_target", t.cfl_target);
    keys.real("time.picard_tol", t.picard_tol);
    keys.integer("time.picard_max_iter", t.picard_max_iter);
    if (const auto* mode = keys.take("time.mode")) {
        if (*mode == "imex_rk2" || *mode == "imex") {
            t.mode = Scheme::ImexRk2;
        } else if (*mode == "picard") {
            t.mode = Scheme::Picard;
        } else {
            throw ConfigError("time.mode: expected imex_rk2 or picard, got '" + *mode + "'");
        }
    }
    keys.real("time.t_end", cfg.t_end);

    keys.count("output.every", cfg.output.every);
    keys.boolean("output.snapshots", cfg.output.snapshots);
    keys.count("output.snapshot_every", cfg.output.snapshot_every);

    keys.u64("ic.seed", cfg.ic.seed);
    keys.boolean("ic.mollify", cfg.ic.mollify);
    cfg.ic.concentrations.clear();
    for (std::size_t i = 1; i <= p.species(); ++i) {
        cfg.ic.concentrations.push_back(parse_field(keys, "ic.c" + std::to_string(i), FieldSpec::constant(1.0)));
    }
    for (int a = 0; a < 3; ++a) {
        cfg.ic.velocity[a] = parse_field(keys, "ic.u" + std::to_string(a + 1), FieldSpec::constant(0.0));
    }
    cfg.ic.temperature = parse_field(keys, "ic.T", FieldSpec::constant(p.T_star));

    keys.reals("study.eta_ladder", cfg.study.eta_ladder);
    keys.real("study.fit_skip", cfg.study.fit_skip);

    keys.reject_unused();
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string config_reference()
{
    return R"(Configuration file: one "key = value" per line, '#' starts a comment.
Unknown or repeated keys are errors.

grid.n                 points per dimension, even, >= 8          [32]

physics.D              ionic diffusivity                          [1]
physics.nu             kinematic viscosity                        [1]
physics.kappa          thermal diffusivity                        [1]
physics.epsilon        dielectric permittivity                    [1]
physics.e_charge       elementary charge                          [1]
physics.k_B            Boltzmann constant                         [1]
physics.N_A            Avogadro constant                          [1]
physics.g              gravitational acceleration                 [0]
physics.alpha_T        thermal expansion coefficient              [0]
physics.alpha_S        haline contraction coefficient             [0]
physics.valences       comma list z_1,..,z_N                      [1,-1]
physics.molar_masses   comma list M_1,..,M_N                      [1,1]
physics.T_star         temperature floor                          [1]
physics.eta            mollification strength, 0 = unmollified    [0]
physics.smallness_C    constant in the decay smallness threshold  [1]

time.dt                step size                                  [0.001]
time.dt_min            adaptive lower bound                       [time.dt]
time.dt_max            adaptive upper bound                       [time.dt]
time.cfl_target        CFL number for adaptive steps, (0,1]       [0.4]
time.mode              imex_rk2 | picard                          [imex_rk2]
time.picard_tol        fixed-point stopping tolerance             [1e-10]
time.picard_max_iter   fixed-point sweep budget                   [50]
time.t_end             final time                                 [1]

output.every           diagnostics cadence in steps               [10]
output.snapshots       write binary snapshots                     [false]
output.snapshot_every  snapshot cadence in steps, 0 = final only  [0]

ic.seed                seed for random_smooth fields              [0]
ic.mollify             apply J_eta to the initial fields          [false]
ic.<field>.kind        constant | single_mode | random_smooth | sum
                       fields: c1..cN, u1, u2, u3, T
                       defaults: c_i = 1, u = 0, T = physics.T_star
  constant:            .value
  single_mode:         .base .amplitude .wavevector (k1,k2,k3) .phase
                       base + amplitude sin(2 pi k.x + phase)
  random_smooth:       .base .amplitude .k0 [2]
  sum:                 .parts = a,b,...; each part under ic.<field>.<part>.*

study.eta_ladder       comma list for eta-study                   [0.4,0.2,0.1,0.05]
study.fit_skip         horizon fraction skipped by decay fits     [0.1]
)";
}

} // namespace npb
