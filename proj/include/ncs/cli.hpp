#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncs/errors.hpp"
#include "ncs/phasespace.hpp"

namespace ncs {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Deformation, FactorialLog, UFunction, State, Wigner, Husimi, Measure, Convergence, Figure };
enum class Format { Csv, Json };

struct RunConfig {
    Command command = Command::State;
    std::string family = "trapped-ion";  // identity | trapped-ion | q-oscillator | linear | series-h1 | series-h2
    double eta2 = 0.0;
    double lambda = 0.0;
    int series_order = 3;
    double alpha_re = 0.0, alpha_im = 0.0;
    std::size_t order = 1;
    std::size_t sector = 0;
    std::optional<std::size_t> n_max;
    double grid_lo = -8.0, grid_hi = 8.0;
    std::size_t grid_points = 257;
    double x_max = 10.0;
    std::string measure_kind = "laguerre";  // laguerre | mellin
    double r_min = 0.1, r_max = 10.0;
    std::size_t r_points = 200;
    std::string preset;
    std::string output_path;  // empty: stdout
    std::optional<Format> format;  // unset: json for state, csv otherwise
    unsigned workers = 0;
};

std::optional<Command> parse_command(const std::string& s);
const char* command_name(Command c);

// Throws InvalidConfig for inconsistent flag combinations.
void validate(const RunConfig& config);

// Fills fields from a JSON object whose keys mirror the long flag names.
void apply_config_json(const nlohmann::json& j, RunConfig& config);

int exit_code(ErrorKind kind);

// Executes one command. On failure a JSON error record goes to `err` and the
// mapped exit code is returned.
int run(const RunConfig& config, std::ostream& err);

void emit_field(const Field& field, const std::string& path, Format format, const nlohmann::json& metadata = {});
void write_field(const Field& field, std::ostream& os, Format format, const nlohmann::json& metadata = {});
Field parse_field_json(const std::string& text);

std::string preset_help();

// States behind the phase-space presets fig1a, fig1b, fig2a, fig2b. The
// amplitudes are normalized on the retained truncation.
struct PresetState {
    DeformationSpec spec;
    cplx alpha;
    std::size_t order = 1;
    std::size_t sector = 0;
    std::size_t n_max = 0;
    NormStatus status = NormStatus::Normalized;
    std::vector<cplx> amplitudes;
};

PresetState preset_state(const std::string& preset);

}  // namespace ncs
