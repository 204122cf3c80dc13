#include "ncs/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ncs/deformation.hpp"
#include "ncs/measure.hpp"
#include "ncs/parallel.hpp"
#include "ncs/states.hpp"

namespace ncs {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CommandName {
    Command c;
    const char* name;
};

constexpr CommandName kCommands[] = {
    {Command::Deformation, "deformation"}, {Command::FactorialLog, "factorial-log"},
    {Command::UFunction, "u-function"},    {Command::State, "state"},
    {Command::Wigner, "wigner"},           {Command::Husimi, "husimi"},
    {Command::Measure, "measure"},         {Command::Convergence, "convergence"},
    {Command::Figure, "figure"},
};

const char* const kFamilies[] = {"identity", "trapped-ion", "q-oscillator", "linear", "series-h1", "series-h2"};

struct PresetInfo {
    const char* name;
    const char* text;
};

constexpr PresetInfo kPresets[] = {
    {"fig1a", "Wigner of the even cat, order 2, sector 0, alpha = 3.5, eta = 0"},
    {"fig1b", "Wigner of the order-2 sector-0 state, h_2 with eta2 = 0.25, alpha = 3.5; the series diverges "
              "there, so it is cut at the first dip after the peak and renormalized"},
    {"fig2a", "Wigner of the order-3 circle state, h_3 with eta2 = 0.1089, alpha = 3.5"},
    {"fig2b", "Wigner of the order-4 circle state, h_4 with eta2 = 0.1089, alpha = 3.5"},
    {"fig3", "columns z, u(sqrt z) for z in [0, 16], 1601 points"},
    {"fig4a", "columns n, log([h1(n)^2]! n! eta2^n) for eta2 = 0.01, n <= 10000"},
    {"fig4b", "as fig4a with eta2 = 0.02"},
    {"fig4c", "as fig4a with eta2 = 0.1"},
    {"fig4d", "as fig4a with eta2 = 0.2"},
    {"fig5", "Laguerre measures with n_max = 50 for eta2 = 0.015, 0.0156, 0.0158, 0.016 on the scan grid"},
};

bool known_preset(const std::string& p) {
    for (const auto& i : kPresets)
        if (p == i.name) return true;
    return false;
}

bool known_family(const std::string& f) {
    for (const char* k : kFamilies)
        if (f == k) return true;
    return false;
}

void invalid(const std::string& what) { raise(ErrorKind::InvalidConfig, what); }

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Deformation for the configured family. `k` is the trapped-ion order.
DeformationSpec build_spec(const RunConfig& c, std::size_t k) {
    const std::string& f = c.family;
    if (f == "identity") return Identity{};
    if (f == "trapped-ion") {
        if (c.eta2 == 0.0) return Identity{};
        return TrappedIon{k, c.eta2};
    }
    if (f == "q-oscillator") return QOscillator{c.lambda};
    if (f == "linear") return linear_approximant(c.eta2);
    if (f == "series-h1") return TruncatedSeries{SeriesBase::H1, c.eta2, c.series_order};
    return TruncatedSeries{SeriesBase::H2, c.eta2, c.series_order};
}

nlohmann::json metadata(const RunConfig& c, const DeformationSpec* spec, std::optional<std::size_t> n_max) {
    nlohmann::json m;
    m["command"] = command_name(c.command);
    if (spec) m["spec"] = describe(*spec);
    m["alpha"] = {c.alpha_re, c.alpha_im};
    m["order"] = c.order;
    m["sector"] = c.sector;
    if (n_max) m["n_max"] = *n_max;
    if (!c.preset.empty()) m["preset"] = c.preset;
    m["version"] = kVersion;
    return m;
}

struct Table {
    std::vector<std::string> names;
    std::vector<std::vector<double>> cols;
};

void write_table(const Table& t, std::ostream& os, Format format, const nlohmann::json& meta) {
    if (format == Format::Csv) {
        for (std::size_t j = 0; j < t.names.size(); ++j) os << (j ? "," : "") << t.names[j];
        os << '\n';
        const std::size_t rows = t.cols.empty() ? 0 : t.cols[0].size();
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < t.cols.size(); ++j) os << (j ? "," : "") << g17(t.cols[j][i]);
            os << '\n';
        }
        return;
    }
    nlohmann::json j;
    j["columns"] = t.names;
    for (std::size_t k = 0; k < t.names.size(); ++k) j[t.names[k]] = t.cols[k];
    j["metadata"] = meta;
    os << j.dump() << '\n';
}

template <class Writer>
void to_output(const std::string& path, Writer&& w) {
    if (path.empty() || path == "-") {
        w(std::cout);
        std::cout.flush();
        if (!std::cout) raise(ErrorKind::IoFailure, "write to stdout failed");
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorKind::IoFailure, "cannot open " + path + " for writing");
    w(os);
    os.flush();
    if (!os) raise(ErrorKind::IoFailure, "write to " + path + " failed");
}

void emit_table(const RunConfig& c, const Table& t, const nlohmann::json& meta) {
    const Format f = c.format.value_or(Format::Csv);
    to_output(c.output_path, [&](std::ostream& os) { write_table(t, os, f, meta); });
}

GridSpec grid_of(const RunConfig& c) {
    GridSpec g;
    g.q_min = g.p_min = c.grid_lo;
    g.q_max = g.p_max = c.grid_hi;
    g.nq = g.np = c.grid_points;
    return g;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

cplx alpha_of(const RunConfig& c) { return {c.alpha_re, c.alpha_im}; }

std::size_t state_n_max(const RunConfig& c, const DeformationSpec& spec) {
    if (c.n_max) return *c.n_max;
    return policy_n_max(spec, alpha_of(c), c.order, c.sector);
}

int cmd_deformation(const RunConfig& c) {
    DeformationSpec spec = build_spec(c, c.order);
    validate(spec);
    const std::size_t n_max = c.n_max.value_or(100);
    std::vector<double> h = h_table(spec, n_max);
    Table t{{"n", "h"}, {{}, {}}};
    for (std::size_t n = first_index(spec); n <= n_max; ++n) {
        t.cols[0].push_back(static_cast<double>(n));
        t.cols[1].push_back(h[n]);
    }
    emit_table(c, t, metadata(c, &spec, n_max));
    return 0;
}

Table factorial_table_for(double eta2, std::size_t n_max) {
    std::vector<double> prof = factorial_log_profile(eta2, n_max);
    Table t{{"n", "value"}, {{}, {}}};
    for (std::size_t i = 0; i < prof.size(); ++i) {
        t.cols[0].push_back(static_cast<double>(i + 1));
        t.cols[1].push_back(prof[i]);
    }
    return t;
}

int cmd_factorial_log(const RunConfig& c) {
    const std::size_t n_max = c.n_max.value_or(10000);
    emit_table(c, factorial_table_for(c.eta2, n_max), metadata(c, nullptr, n_max));
    return 0;
}

int cmd_u_function(const RunConfig& c) {
    Table t{{"x", "u"}, {linspace(0.0, c.x_max, c.grid_points), {}}};
    for (double x : t.cols[0]) t.cols[1].push_back(u_function(x));
    emit_table(c, t, metadata(c, nullptr, std::nullopt));
    return 0;
}

int cmd_state(const RunConfig& c) {
    DeformationSpec spec = build_spec(c, c.order);
    validate(spec);
    const std::size_t n_max = state_n_max(c, spec);
    NcsState s = ncs_circle(spec, alpha_of(c), c.order, c.sector, n_max);
    Table t{{"n", "re", "im"}, {{}, {}, {}}};
    for (std::size_t n = 0; n < s.amplitudes.size(); ++n) {
        t.cols[0].push_back(static_cast<double>(n));
        t.cols[1].push_back(s.amplitudes[n].real());
        t.cols[2].push_back(s.amplitudes[n].imag());
    }
    nlohmann::json meta = metadata(c, &spec, n_max);
    meta["norm_status"] = s.norm_status == NormStatus::Normalized ? "normalized" : "divergent-at-alpha";
    meta["tail_mass_estimate"] = s.tail_mass_estimate;
    const Format f = c.format.value_or(Format::Json);
    to_output(c.output_path, [&](std::ostream& os) { write_table(t, os, f, meta); });
    return 0;
}

int cmd_field(const RunConfig& c) {
    DeformationSpec spec = build_spec(c, c.order);
    validate(spec);
    const std::size_t n_max = state_n_max(c, spec);
    NcsState s = ncs_circle(spec, alpha_of(c), c.order, c.sector, n_max);
    const GridSpec g = grid_of(c);
    const unsigned w = resolve_workers(c.workers);
    Field f = c.command == Command::Wigner ? wigner(s, g, w) : husimi(s, g, w);
    emit_field(f, c.output_path, c.format.value_or(Format::Csv), metadata(c, &spec, n_max));
    return 0;
}

int cmd_measure(const RunConfig& c) {
    DeformationSpec spec = build_spec(c, 1);
    validate(spec);
    std::vector<double> xs = negativity_scan_grid();
    Table t{{"x", "density"}, {xs, {}}};
    std::optional<std::size_t> n_used;
    if (c.measure_kind == "laguerre") {
        n_used = c.n_max.value_or(50);
        LaguerreMeasure m = laguerre_measure(spec, *n_used);
        for (double x : xs) t.cols[1].push_back(m.density(x));
    } else {
        HypergeometricMeasure m = mellin_measure_rational(std::get<Rational>(spec));
        for (double x : xs) t.cols[1].push_back(m.density(x));
    }
    nlohmann::json meta = metadata(c, &spec, n_used);
    meta["measure"] = c.measure_kind;
    emit_table(c, t, meta);
    return 0;
}

int cmd_convergence(const RunConfig& c) {
    DeformationSpec spec = build_spec(c, 1);
    validate(spec);
    const std::size_t n_max = c.n_max.value_or(100000);
    std::vector<cplx> dirs;
    for (int k = 0; k < 8; ++k) dirs.push_back(std::polar(1.0, k * kPi / 4.0));
    std::vector<ProbeResult> res = convergence_probe(spec, dirs, linspace(c.r_min, c.r_max, c.r_points), n_max);
    Table t{{"angle", "boundary"}, {{}, {}}};
    for (const auto& r : res) {
        t.cols[0].push_back(std::arg(r.direction));
        t.cols[1].push_back(r.boundary);
    }
    emit_table(c, t, metadata(c, &spec, n_max));
    return 0;
}

int cmd_figure(const RunConfig& c) {
    const std::string& p = c.preset;
    if (p == "fig1a" || p == "fig1b" || p == "fig2a" || p == "fig2b") {
        PresetState s = preset_state(p);
        Field f = wigner(s.amplitudes, grid_of(c), resolve_workers(c.workers));
        nlohmann::json meta = metadata(c, &s.spec, s.n_max);
        meta["alpha"] = {s.alpha.real(), s.alpha.imag()};
        meta["order"] = s.order;
        meta["sector"] = s.sector;
        meta["norm_status"] = s.status == NormStatus::Normalized ? "normalized" : "divergent-at-alpha";
        emit_field(f, c.output_path, c.format.value_or(Format::Csv), meta);
        return 0;
    }
    if (p == "fig3") {
        Table t{{"z", "u_sqrt_z"}, {linspace(0.0, 16.0, 1601), {}}};
        for (double z : t.cols[0]) t.cols[1].push_back(u_function(std::sqrt(z)));
        emit_table(c, t, metadata(c, nullptr, std::nullopt));
        return 0;
    }
    if (p.rfind("fig4", 0) == 0) {
        const double eta2 = p == "fig4a" ? 0.01 : p == "fig4b" ? 0.02 : p == "fig4c" ? 0.1 : 0.2;
        nlohmann::json meta = metadata(c, nullptr, 10000);
        meta["eta2"] = eta2;
        emit_table(c, factorial_table_for(eta2, 10000), meta);
        return 0;
    }
    // fig5
    const double etas[] = {0.015, 0.0156, 0.0158, 0.016};
    std::vector<double> xs = negativity_scan_grid();
    Table t{{"x"}, {xs}};
    for (double e : etas) {
        LaguerreMeasure m = laguerre_measure(TrappedIon{1, e}, 50);
        t.names.push_back("eta2_" + g17(e));
        std::vector<double> col;
        col.reserve(xs.size());
        for (double x : xs) col.push_back(m.density(x));
        t.cols.push_back(std::move(col));
    }
    emit_table(c, t, metadata(c, nullptr, 50));
    return 0;
}

}  // namespace

std::optional<Command> parse_command(const std::string& s) {
    for (const auto& c : kCommands)
        if (s == c.name) return c.c;
    return std::nullopt;
}

const char* command_name(Command c) {
    for (const auto& k : kCommands)
        if (k.c == c) return k.name;
    return "?";
}

void validate(const RunConfig& c) {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!known_family(c.family)) invalid("unknown family '" + c.family + "'");
    if (!finite(c.eta2) || c.eta2 < 0.0) invalid("eta2 must be finite and >= 0");
    if (!finite(c.alpha_re) || !finite(c.alpha_im)) invalid("alpha must be finite");
    if (c.order < 1) invalid("order must be >= 1");
    if (c.sector >= c.order) invalid("sector must be smaller than order");
    if (c.n_max && (*c.n_max < 1 || *c.n_max > 10000000)) invalid("n-max must lie in [1, 1e7]");
    if (c.n_max && c.sector > *c.n_max) invalid("n-max is below the sector");
    if (!(c.grid_lo < c.grid_hi) || !finite(c.grid_lo) || !finite(c.grid_hi)) invalid("grid range must be increasing");
    if (c.grid_points < 2 || c.grid_points > 20001) invalid("grid points must lie in [2, 20001]");
    if (!(c.x_max > 0.0) || !finite(c.x_max)) invalid("x-max must be positive");
    if (!c.preset.empty() && c.command != Command::Figure) invalid("--preset only applies to the figure command");

    const bool uses_family = c.command == Command::Deformation || c.command == Command::State ||
                             c.command == Command::Wigner || c.command == Command::Husimi ||
                             c.command == Command::Measure || c.command == Command::Convergence;
    if (uses_family) {
        if (c.family == "q-oscillator" && !(c.lambda > 0.0)) invalid("q-oscillator needs --lambda > 0");
        if ((c.family == "linear" || c.family.rfind("series-", 0) == 0) && !(c.eta2 > 0.0))
            invalid("family '" + c.family + "' needs --eta2 > 0");
        if (c.family.rfind("series-", 0) == 0 && (c.series_order < 1 || c.series_order > 3))
            invalid("series order must be 1, 2 or 3");
    }

    switch (c.command) {
        case Command::FactorialLog:
            if (!(c.eta2 > 0.0)) invalid("factorial-log needs --eta2 > 0");
            break;
        case Command::Measure:
            if (c.measure_kind != "laguerre" && c.measure_kind != "mellin")
                invalid("measure kind must be laguerre or mellin");
            if (c.measure_kind == "mellin" && c.family != "linear")
                invalid("the mellin measure is built for the linear family");
            if (c.order != 1) invalid("measure works on first-order states");
            break;
        case Command::Convergence:
            if (!(c.r_min > 0.0) || !(c.r_max > c.r_min)) invalid("radius range must satisfy 0 < r-min < r-max");
            if (c.r_points < 2) invalid("radius points must be >= 2");
            if (c.order != 1) invalid("convergence works on first-order states");
            break;
        case Command::Figure:
            if (c.preset.empty()) invalid("figure needs --preset");
            if (!known_preset(c.preset)) invalid("unknown preset '" + c.preset + "'");
            break;
        default:
            break;
    }
}

void apply_config_json(const nlohmann::json& j, RunConfig& c) {
    if (!j.is_object()) invalid("config must be a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            const auto& v = it.value();
            if (k == "command") {
                auto cmd = parse_command(v.get<std::string>());
                if (!cmd) invalid("unknown command '" + v.get<std::string>() + "'");
                c.command = *cmd;
            } else if (k == "family") c.family = v.get<std::string>();
            else if (k == "eta2") c.eta2 = v.get<double>();
            else if (k == "lambda") c.lambda = v.get<double>();
            else if (k == "series-order") c.series_order = v.get<int>();
            else if (k == "alpha-re") c.alpha_re = v.get<double>();
            else if (k == "alpha-im") c.alpha_im = v.get<double>();
            else if (k == "order") c.order = v.get<std::size_t>();
            else if (k == "sector") c.sector = v.get<std::size_t>();
            else if (k == "n-max") c.n_max = v.get<std::size_t>();
            else if (k == "grid-range") {
                c.grid_lo = v.at(0).get<double>();
                c.grid_hi = v.at(1).get<double>();
            } else if (k == "grid-points") c.grid_points = v.get<std::size_t>();
            else if (k == "x-max") c.x_max = v.get<double>();
            else if (k == "measure") c.measure_kind = v.get<std::string>();
            else if (k == "r-range") {
                c.r_min = v.at(0).get<double>();
                c.r_max = v.at(1).get<double>();
            } else if (k == "r-points") c.r_points = v.get<std::size_t>();
            else if (k == "preset") c.preset = v.get<std::string>();
            else if (k == "output") c.output_path = v.get<std::string>();
            else if (k == "format") {
                const std::string f = v.get<std::string>();
                if (f == "csv") c.format = Format::Csv;
                else if (f == "json") c.format = Format::Json;
                else invalid("format must be csv or json");
            } else if (k == "workers") c.workers = v.get<unsigned>();
            else invalid("unknown config key '" + k + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        invalid(std::string("config value has the wrong type: ") + e.what());
    }
}

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidConfig:
        case ErrorKind::MissingParameter:
            return 2;
        case ErrorKind::DeformationPole:
        case ErrorKind::PoleProximity:
        case ErrorKind::RootAtEvaluationPoint:
        case ErrorKind::GammaPole:
        case ErrorKind::PoleParameter:
        case ErrorKind::NearTangentPole:
            return 3;
        case ErrorKind::Divergent:
        case ErrorKind::MagnitudeOverflow:
            return 4;
        case ErrorKind::IoFailure:
            return 5;
        default:
            return 6;
    }
}

int run(const RunConfig& config, std::ostream& err) {
    auto report = [&](const std::string& kind, const std::string& msg, std::optional<long> index, int code) {
        nlohmann::json e{{"error", kind}, {"message", msg}, {"exit_code", code}};
        if (index) e["index"] = *index;
        err << e.dump() << '\n';
        return code;
    };
    try {
        validate(config);
        switch (config.command) {
            case Command::Deformation: return cmd_deformation(config);
            case Command::FactorialLog: return cmd_factorial_log(config);
            case Command::UFunction: return cmd_u_function(config);
            case Command::State: return cmd_state(config);
            case Command::Wigner:
            case Command::Husimi: return cmd_field(config);
            case Command::Measure: return cmd_measure(config);
            case Command::Convergence: return cmd_convergence(config);
            case Command::Figure: return cmd_figure(config);
        }
        return 0;
    } catch (const Error& e) {
        return report(to_string(e.kind()), e.what(), e.index(), exit_code(e.kind()));
    } catch (const std::exception& e) {
        return report("Internal", e.what(), std::nullopt, 1);
    }
}

std::string preset_help() {
    std::ostringstream os;
    os << "Presets (figure --preset NAME); fields use the --grid-range/--grid-points grid, default [-8,8] x 257:\n";
    for (const auto& p : kPresets) os << "  " << p.name << "  " << p.text << '\n';
    return os.str();
}

PresetState preset_state(const std::string& preset) {
    PresetState s;
    s.alpha = {3.5, 0.0};
    if (preset == "fig1a") {
        s.spec = Identity{};
        s.order = 2;
        s.n_max = policy_n_max(s.spec, s.alpha, 2, 0);
    } else if (preset == "fig1b") {
        s.spec = TrappedIon{2, 0.25};
        s.order = 2;
        s.n_max = first_dip_after_peak(s.spec, s.alpha, 2, 0, 4096);
    } else if (preset == "fig2a" || preset == "fig2b") {
        s.order = preset == "fig2a" ? 3 : 4;
        s.spec = TrappedIon{s.order, 0.1089};
        s.n_max = std::max<std::size_t>(200, policy_n_max(s.spec, s.alpha, s.order, 0));
    } else {
        invalid("'" + preset + "' is not a phase-space preset");
    }
    NcsState st = ncs_circle(s.spec, s.alpha, s.order, s.sector, s.n_max);
    s.status = st.norm_status;
    s.amplitudes = std::move(st.amplitudes);
    return s;
}

}  // namespace ncs
