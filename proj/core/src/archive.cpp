#include "speigen/archive.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace speigen {

namespace {

constexpr int archive_version = 1;
using json = nlohmann::ordered_json;

// FNV-1a over a canonical textual rendering of the config.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string canonical_config_text(const SolverConfig& c) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "domain=%.17g growth=%.17g itol=%.17g otol=%.17g imax=%d "
                  "omax=%d ppw=%d gmin=%zu gmax=%zu mix=%.17g tail=%.17g "
                  "integ=%d quad=%d",
                  c.initial_domain, c.domain_growth, c.inner_tol, c.outer_tol,
                  c.max_inner_iters, c.max_outer_iters, c.points_per_wavelength,
                  c.min_grid_points, c.max_grid_points, c.mixing, c.tail_exponent,
                  static_cast<int>(c.integrator), static_cast<int>(c.quadrature));
    return buf;
}

const char b64_alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string encode_doubles(const std::vector<double>& v) {
    // float64 little-endian bytes, then base64
    std::string bytes(v.size() * 8, '\0');
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &v[i], 8);
        for (int b = 0; b < 8; ++b)
            bytes[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xff);
    }
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        std::uint32_t w = (static_cast<unsigned char>(bytes[i]) << 16) |
                          (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                          static_cast<unsigned char>(bytes[i + 2]);
        out += b64_alphabet[(w >> 18) & 63];
        out += b64_alphabet[(w >> 12) & 63];
        out += b64_alphabet[(w >> 6) & 63];
        out += b64_alphabet[w & 63];
    }
    std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        std::uint32_t w = static_cast<unsigned char>(bytes[i]) << 16;
        out += b64_alphabet[(w >> 18) & 63];
        out += b64_alphabet[(w >> 12) & 63];
        out += "==";
    } else if (rem == 2) {
        std::uint32_t w = (static_cast<unsigned char>(bytes[i]) << 16) |
                          (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += b64_alphabet[(w >> 18) & 63];
        out += b64_alphabet[(w >> 12) & 63];
        out += b64_alphabet[(w >> 6) & 63];
        out += '=';
    }
    return out;
}

std::vector<double> decode_doubles(const std::string& b64) {
    static const std::array<int, 256> inv = [] {
        std::array<int, 256> t{};
        t.fill(-1);
        for (int i = 0; i < 64; ++i)
            t[static_cast<unsigned char>(b64_alphabet[i])] = i;
        return t;
    }();
    std::string bytes;
    bytes.reserve(b64.size() / 4 * 3);
    std::uint32_t w = 0;
    int nbits = 0;
    for (char ch : b64) {
        if (ch == '=' || ch == '\n' || ch == '\r') continue;
        int v = inv[static_cast<unsigned char>(ch)];
        if (v < 0) throw ArchiveError("invalid base64 character in profile block");
        w = (w << 6) | static_cast<std::uint32_t>(v);
        nbits += 6;
        if (nbits >= 8) {
            nbits -= 8;
            bytes += static_cast<char>((w >> nbits) & 0xff);
        }
    }
    if (bytes.size() % 8 != 0)
        throw ArchiveError("profile block length is not a multiple of 8 bytes");
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b)
            bits |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(bytes[i * 8 + b]))
                    << (8 * b);
        std::memcpy(&out[i], &bits, 8);
    }
    return out;
}

json config_to_json(const SolverConfig& c) {
    json j;
    j["n"] = c.n;
    j["initial_domain"] = c.initial_domain;
    j["domain_growth"] = c.domain_growth;
    j["inner_tol"] = c.inner_tol;
    j["outer_tol"] = c.outer_tol;
    j["max_inner_iters"] = c.max_inner_iters;
    j["max_outer_iters"] = c.max_outer_iters;
    j["points_per_wavelength"] = c.points_per_wavelength;
    j["min_grid_points"] = c.min_grid_points;
    j["max_grid_points"] = c.max_grid_points;
    j["mixing"] = c.mixing;
    j["tail_exponent"] = c.tail_exponent;
    j["integrator"] = c.integrator == Integrator::numerov ? "numerov" : "rk4";
    j["quadrature"] =
        c.quadrature == Quadrature::trapezoid ? "trapezoid" : "simpson";
    return j;
}

SolverConfig config_from_json(const json& j) {
    SolverConfig c;
    c.n = j.at("n").get<int>();
    c.initial_domain = j.at("initial_domain").get<double>();
    c.domain_growth = j.at("domain_growth").get<double>();
    c.inner_tol = j.at("inner_tol").get<double>();
    c.outer_tol = j.at("outer_tol").get<double>();
    c.max_inner_iters = j.at("max_inner_iters").get<int>();
    c.max_outer_iters = j.at("max_outer_iters").get<int>();
    c.points_per_wavelength = j.at("points_per_wavelength").get<int>();
    c.min_grid_points = j.at("min_grid_points").get<std::size_t>();
    c.max_grid_points = j.at("max_grid_points").get<std::size_t>();
    c.mixing = j.at("mixing").get<double>();
    c.tail_exponent = j.at("tail_exponent").get<double>();
    c.integrator = j.at("integrator").get<std::string>() == "rk4"
                       ? Integrator::rk4
                       : Integrator::numerov;
    c.quadrature = j.at("quadrature").get<std::string>() == "simpson"
                       ? Quadrature::simpson
                       : Quadrature::trapezoid;
    return c;
}

}  // namespace

std::string config_hash(const SolverConfig& config) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a(canonical_config_text(config))));
    return buf;
}

std::filesystem::path state_filename(int n, const std::string& hash) {
    std::ostringstream name;
    name << "state-n" << n << "-" << hash << ".json";
    return name.str();
}

void save_state(const EigenState& state, const SolverConfig& config,
                const std::filesystem::path& file) {
    json j;
    j["format"] = "sp-eigen-state";
    j["version"] = archive_version;
    j["config"] = config_to_json(config);
    j["config_hash"] = config_hash(config);
    j["n"] = state.n;
    j["epsilon"] = encode_doubles({state.epsilon});
    j["converged"] = state.converged;
    j["norm_residual"] = encode_doubles({state.norm_residual});
    j["eq_residual"] = encode_doubles({state.eq_residual});

    json grid;
    grid["uniform"] = state.f.grid->uniform;
    grid["points"] = state.f.grid->size();
    grid["r_max"] = encode_doubles({state.f.grid->r_max()});
    if (!state.f.grid->uniform) grid["r"] = encode_doubles(state.f.grid->r);
    j["grid"] = grid;

    j["f"] = encode_doubles(state.f.values);
    j["phi"] = encode_doubles(state.phi.values);

    json trace;
    trace["inner_epsilons"] = encode_doubles(state.trace.inner_epsilons);
    trace["outer_epsilons"] = encode_doubles(state.trace.outer_epsilons);
    trace["total_inner_iters"] = state.trace.total_inner_iters;
    trace["outer_iters"] = state.trace.outer_iters;
    j["trace"] = trace;

    std::filesystem::path tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw ArchiveError("cannot open " + tmp.string() + " for writing");
        out << j.dump(1) << "\n";
        if (!out) throw ArchiveError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

EigenState load_state(const std::filesystem::path& file, SolverConfig* config_out) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ArchiveError("cannot open " + file.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ArchiveError("cannot parse " + file.string() + ": " + e.what());
    }
    if (j.value("format", "") != "sp-eigen-state")
        throw ArchiveError(file.string() + " is not a state archive");
    if (j.at("version").get<int>() != archive_version)
        throw ArchiveError("unsupported archive version in " + file.string());

    SolverConfig config = config_from_json(j.at("config"));
    if (config_out) *config_out = config;

    EigenState state;
    state.n = j.at("n").get<int>();
    state.epsilon = decode_doubles(j.at("epsilon").get<std::string>()).at(0);
    state.converged = j.at("converged").get<bool>();
    state.norm_residual =
        decode_doubles(j.at("norm_residual").get<std::string>()).at(0);
    state.eq_residual = decode_doubles(j.at("eq_residual").get<std::string>()).at(0);

    const json& grid = j.at("grid");
    GridPtr g;
    if (grid.at("uniform").get<bool>()) {
        double r_max = decode_doubles(grid.at("r_max").get<std::string>()).at(0);
        g = RadialGrid::make_uniform(r_max, grid.at("points").get<std::size_t>());
    } else {
        g = RadialGrid::make_explicit(decode_doubles(grid.at("r").get<std::string>()));
    }

    std::vector<double> f = decode_doubles(j.at("f").get<std::string>());
    std::vector<double> phi = decode_doubles(j.at("phi").get<std::string>());
    if (f.size() != g->size() || phi.size() != g->size())
        throw ArchiveError("profile length mismatch in " + file.string());
    state.f = RadialProfile(g, std::move(f));
    state.phi = RadialProfile(g, std::move(phi));

    const json& trace = j.at("trace");
    state.trace.inner_epsilons =
        decode_doubles(trace.at("inner_epsilons").get<std::string>());
    state.trace.outer_epsilons =
        decode_doubles(trace.at("outer_epsilons").get<std::string>());
    state.trace.total_inner_iters = trace.at("total_inner_iters").get<int>();
    state.trace.outer_iters = trace.at("outer_iters").get<int>();
    return state;
}

EigenState solve_cached(const SolverConfig& config,
                        const std::filesystem::path& cache_dir, bool* cache_hit) {
    std::filesystem::create_directories(cache_dir);
    std::filesystem::path file =
        cache_dir / state_filename(config.n, config_hash(config));
    if (std::filesystem::exists(file)) {
        try {
            EigenState state = load_state(file);
            if (cache_hit) *cache_hit = true;
            return state;
        } catch (const ArchiveError&) {
            // unreadable entry: fall through and recompute
        }
    }
    if (cache_hit) *cache_hit = false;
    EigenState state = solve_stationary_state(config);
    save_state(state, config, file);
    return state;
}

}  // namespace speigen
