// File formats: state / spec / recipe JSON documents, the sweep / Husimi /
// fidelity CSV tables, and the small config-string parsers the CLI uses.
// Floats are always written with 17 significant digits so every file
// round-trips bit-exactly.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fockgen/engineer.hpp"
#include "fockgen/random_state.hpp"
#include "fockgen/stats.hpp"

namespace fock {

using Json = nlohmann::json;

inline constexpr const char* kToolName = "fockgen";
inline constexpr const char* kToolVersion = "0.1.0";

// "%.17g" rendering, the round-trip-exact form used in every file.
std::string format_sig17(double value);

// --- JSON documents ------------------------------------------------------

// { "dim": int, "amplitudes": [[re, im], ...], "meta": {...} }
std::string state_json(const State& state, const Json& meta);
State state_from_json(const Json& doc);

// { "n": int, "theta": float, "seed": uint64, "distribution": "uniform-unit" }
std::string spec_json(const RandomStateSpec& spec);
RandomStateSpec spec_from_json(const Json& doc);

// { "coeffs": [...], "roots": [...], "alphas": [...], "transmittance": f,
//   "success_prob": f, "residual": f, "meta": {...} }
std::string recipe_json(const Recipe& recipe, const Json& meta);
Recipe recipe_from_json(const Json& doc);

std::string report_json(const StatsReport& report, const Json& meta);

// --- CSV tables -----------------------------------------------------------

// Columns: n, realization, mean_n, delta_n, mandel_q, g2, x1_var, x2_var,
// entropy. A leading "# meta: ..." comment carries provenance.
std::string sweep_csv(const std::vector<SweepRow>& rows, const Json& meta);

// Columns: re_beta, im_beta, q_value (cell centers, re-major order).
std::string husimi_csv(const HusimiGrid& grid, const Json& meta);

// Columns: eta, fidelity.
std::string fidelity_csv(const std::vector<std::pair<double, double>>& rows,
                         const Json& meta);

// --- Files ----------------------------------------------------------------

// Writes via a temp file in the same directory plus rename.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
Json read_json_file(const std::string& path);

// --- CLI config strings ----------------------------------------------------

// "5" | "2:200" | "2:200:2" | comma-separated mix, ascending result.
std::vector<int> parse_n_list(const std::string& text);

// "lo:hi:step".
TransmittanceGrid parse_t_grid(const std::string& text);

// "auto" | "re0:re1:im0:im1".
HusimiWindow parse_window(const std::string& text);

}  // namespace fock
