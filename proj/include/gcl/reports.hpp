#pragma once

// Run configuration, artifact files and the subcommands behind `gcl`.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gcl/bounds.hpp"
#include "gcl/surface.hpp"
#include "gcl/tiling.hpp"

namespace gcl {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInput = 2, kExitInsufficient = 3, kExitBudget = 4 };

int exit_code_for(ErrorKind kind);

struct RunConfig {
    SurfaceSpec surface = SurfaceSpec::default_genus2();
    double max_length = 4.0;
    std::vector<double> eps_grid{0.02, 0.05, 0.1};
    std::vector<double> T_grid{3.0, 4.0, 5.0};
    std::vector<double> i_cc_grid{0.0, 1e-4, 1e-3, 0.01, 0.1, 1.0, 10.0, 100.0};
    std::vector<double> admissible_eps{0.1, 0.15, 0.2, 0.3};
    int admissible_n_max = 12;
    std::string outputs = "gcl-out";
    std::uint64_t seed = 0xC0FFEE;
    std::size_t tile_budget = kDefaultTileBudget;
    int threads = 1;
    bool nudge_twists = false;
    std::optional<int> genus;   // bounds without a built surface
    std::optional<double> sys;
    std::string inject_fault;   // "skip-proper-ordering" disables proper ordering in verify

    /// Throws InvalidSpec: grids must be sorted ascending, budgets positive.
    void validate() const;

    /// Unknown keys are rejected; a string "surface" is a path relative to base_dir.
    static RunConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
    nlohmann::json to_json() const;
};

RunConfig load_run_config(const std::string& path);

/// Twists moved by 1e-3, the retry for vertex-passing curves.
SurfaceSpec nudged(const SurfaceSpec& spec);

std::uint64_t fnv1a64(std::string_view data);

/// Appends "# fnv1a64 <16 hex digits>" covering every preceding byte.
std::string with_checksum(const std::string& body);

/// Strips and checks the trailing checksum line. Throws InvalidSpec.
std::string strip_checksum(const std::string& text);

struct CensusEntry {
    double length = 0.0;
    std::string word;
    bool primitive = true;
    int power = 1;
    long long self_int = 0;
    bool from_chords = true;  // false: linking count, type columns left empty
    std::array<long long, 4> by_type{};
};

std::string census_csv(const std::vector<CensusEntry>& rows);
std::vector<CensusEntry> parse_census_csv(const std::string& text);

/// Census rows for every unoriented class up to cfg.max_length, sorted by
/// length then word.
std::vector<CensusEntry> compute_census(const HexagonDecomposition& dec, const ConstantsLedger& ledger,
                                        const RunConfig& cfg);

struct FamilyResult {
    std::string name;
    bool passed = true;
    long long checked = 0;
    long long skipped = 0;
    double worst_margin = 0.0;  // smallest slack of the inequality over checked cases
    nlohmann::json counterexample;

    nlohmann::json to_json() const;
};

/// Invariant families over a census: combinatorial length bound, phi type
/// elimination, type-2 monotonicity, dual intersection agreement, admissible
/// counts under the bound, interaction strength, edge-word round trip.
std::vector<FamilyResult> verify_families(const HexagonDecomposition& dec, const ConstantsLedger& ledger,
                                          double max_length, const RunConfig& cfg);

int cmd_build(const RunConfig& cfg, std::ostream& log);
int cmd_census(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_bounds(const RunConfig& cfg, std::ostream& log);
int cmd_words(const RunConfig& cfg, std::ostream& log);

/// Runs a command, mapping library and parse errors to exit codes.
int run_guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace gcl
