#include "npb/io.hpp"

#include "npb/errors.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace npb {

namespace {

constexpr char magic[4] = {'N', 'P', 'B', '1'};

void put_u32(std::string& out, std::uint32_t v)
{
    for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
    }
}

void put_f64(std::string& out, double v)
{
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<char>((bits >> (8 * b)) & 0xffu));
    }
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    void need(std::size_t count, const char* what) const
    {
        if (bytes_.size() - pos_ < count) {
            throw FormatError(std::string("snapshot truncated while reading ") + what);
        }
    }

    std::uint32_t u32(const char* what)
    {
        need(4, what);
        std::uint32_t v = 0;
        for (int b = 0; b < 4; ++b) {
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
        }
        pos_ += 4;
        return v;
    }

    double f64(const char* what)
    {
        need(8, what);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
        }
        pos_ += 8;
        return std::bit_cast<double>(v);
    }

    void field(ScalarField& f, const char* what)
    {
        need(8 * f.size(), what);
        for (auto& v : f.values) {
            v = f64(what);
        }
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t pos_ = 0;

private:
    const std::string& bytes_;
};

} // namespace

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string timeseries_header(std::size_t species)
{
    std::string h = "time,entropy_E,energy_calE,dissipation_D,temp_L2_dev,u_L2,cancellation_residual,ckp_margin,min_T";
    for (std::size_t i = 1; i <= species; ++i) {
        h += ",min_c_" + std::to_string(i);
    }
    for (std::size_t i = 1; i <= species; ++i) {
        h += ",conc_L1_dev_" + std::to_string(i);
    }
    return h;
}

std::string timeseries_row(const DiagnosticsRecord& r)
{
    std::string row;
    for (double v : {r.time, r.entropy_E, r.energy_calE, r.dissipation_D, r.temp_L2_dev, r.u_L2,
                     r.cancellation_residual, r.ckp_margin, r.min_T}) {
        if (!row.empty()) row += ',';
        row += format_double(v);
    }
    for (double v : r.min_c) {
        row += ',' + format_double(v);
    }
    for (double v : r.conc_L1_dev) {
        row += ',' + format_double(v);
    }
    return row;
}

void write_timeseries(const std::vector<DiagnosticsRecord>& records, std::size_t species,
                      const std::filesystem::path& path)
{
    std::string text = timeseries_header(species) + '\n';
    for (const auto& r : records) {
        text += timeseries_row(r) + '\n';
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size()))) {
        throw IoError("cannot write time series to " + path.string());
    }
}

std::string encode_snapshot(const SimState& s, int n)
{
    std::string out(magic, 4);
    put_u32(out, snapshot_version);
    put_u32(out, static_cast<std::uint32_t>(n));
    put_u32(out, static_cast<std::uint32_t>(s.concentrations.size()));
    put_f64(out, s.time);
    auto put_field = [&](const ScalarField& f) {
        for (double v : f.values) {
            put_f64(out, v);
        }
    };
    for (const auto& c : s.concentrations) {
        put_field(c);
    }
    for (const auto& u : s.velocity) {
        put_field(u);
    }
    put_field(s.temperature);
    return out;
}

Snapshot decode_snapshot(const std::string& bytes)
{
    if (bytes.size() < 4 || std::memcmp(bytes.data(), magic, 4) != 0) {
        throw FormatError("snapshot magic is not NPB1");
    }
    Reader rd(bytes);
    rd.pos_ = 4;
    const auto version = rd.u32("version");
    if (version != snapshot_version) {
        throw FormatError("unsupported snapshot version " + std::to_string(version));
    }
    const auto n = rd.u32("grid size");
    const auto species = rd.u32("species count");
    if (n == 0 || n > 4096) {
        throw FormatError("implausible grid size " + std::to_string(n));
    }
    const std::size_t points = static_cast<std::size_t>(n) * n * n;
    const std::size_t expected = 8 * (1 + points * (species + 4));
    if (rd.remaining() != expected) {
        std::ostringstream msg;
        msg << "snapshot payload holds " << rd.remaining() << " bytes, expected " << expected;
        throw FormatError(msg.str());
    }

    Snapshot snap;
    snap.n = static_cast<int>(n);
    snap.state.time = rd.f64("time");
    snap.state.concentrations.assign(species, ScalarField(points));
    for (auto& c : snap.state.concentrations) {
        rd.field(c, "concentration");
    }
    for (auto& u : snap.state.velocity) {
        u = ScalarField(points);
        rd.field(u, "velocity");
    }
    snap.state.temperature = ScalarField(points);
    rd.field(snap.state.temperature, "temperature");
    return snap;
}

void write_snapshot(const SimState& s, int n, const std::filesystem::path& path)
{
    const auto bytes = encode_snapshot(s, n);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
        throw IoError("cannot write snapshot to " + path.string());
    }
}

Snapshot read_snapshot(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open snapshot " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_snapshot(buf.str());
}

} // namespace npb
