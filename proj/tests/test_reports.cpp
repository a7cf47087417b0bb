#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gcl/reports.hpp"

using namespace gcl;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("gcl-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig config_in(const fs::path& dir, double T) {
    RunConfig c;
    c.outputs = dir.string();
    c.max_length = T;
    c.admissible_n_max = 7;
    return c;
}

int run(const std::function<int(const RunConfig&, std::ostream&)>& cmd, const RunConfig& cfg,
        std::string* err_text = nullptr) {
    std::ostringstream log, err;
    const int rc = run_guarded([&] { return cmd(cfg, log); }, err);
    if (err_text) *err_text = err.str();
    return rc;
}

}  // namespace

TEST_CASE("fnv1a checksums") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    const std::string text = with_checksum("x,y\n1,2\n");
    CHECK(strip_checksum(text) == "x,y\n1,2\n");
    std::string bad = text;
    bad[4] = '3';
    CHECK_THROWS_AS(strip_checksum(bad), Error);
    CHECK_THROWS_AS(strip_checksum("x,y\n"), Error);
}

TEST_CASE("exit codes") {
    CHECK(exit_code_for(ErrorKind::InvalidSpec) == 2);
    CHECK(exit_code_for(ErrorKind::InsufficientData) == 3);
    CHECK(exit_code_for(ErrorKind::IncompleteCensus) == 3);
    CHECK(exit_code_for(ErrorKind::BudgetExceeded) == 4);
    CHECK(exit_code_for(ErrorKind::VertexDegeneracy) == 1);
}

TEST_CASE("run configuration") {
    const RunConfig d = RunConfig::from_json(nlohmann::json::object());
    CHECK(d.seed == 0xC0FFEE);
    CHECK(d.surface.to_json() == SurfaceSpec::default_genus2().to_json());
    const RunConfig back = RunConfig::from_json(d.to_json());
    CHECK(back.to_json() == d.to_json());
    CHECK_THROWS_AS(RunConfig::from_json({{"eps_grid", {0.1, 0.05}}}), Error);
    CHECK_THROWS_AS(RunConfig::from_json({{"budgets", {{"tiles", 0}}}}), Error);
    CHECK_THROWS_AS(RunConfig::from_json({{"max_lenght", 3}}), Error);
    CHECK_THROWS_AS(RunConfig::from_json({{"max_length", "three"}}), Error);

    const SurfaceSpec n = nudged(d.surface);
    for (std::size_t j = 0; j < n.twists.size(); ++j) CHECK(std::abs(n.twists[j] - d.surface.twists[j]) == doctest::Approx(1e-3));
}

TEST_CASE("census csv round trip") {
    std::vector<CensusEntry> rows(2);
    rows[0] = {2.0, "e6 e12", true, 1, 0, false, {}};
    rows[1] = {5.25, "e1 e3", true, 1, 3, true, {1, 0, 2, 0}};
    const std::vector<CensusEntry> back = parse_census_csv(census_csv(rows));
    REQUIRE(back.size() == 2);
    CHECK(back[0].word == "e6 e12");
    CHECK_FALSE(back[0].from_chords);
    CHECK(back[1].by_type == std::array<long long, 4>{1, 0, 2, 0});
    CHECK(back[1].length == 5.25);
    CHECK_THROWS_AS(parse_census_csv("length,word\n"), Error);
}

TEST_CASE("build writes the surface artifacts") {
    const fs::path dir = fresh_dir("build");
    const RunConfig cfg = config_in(dir, 4.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    const nlohmann::json ledger = nlohmann::json::parse(slurp(dir / "ledger.json"));
    CHECK(ledger["bg_bound"] == 385.0);
    CHECK(ledger["format"] == "ledger-v1");
    CHECK(nlohmann::json::parse(slurp(dir / "surface.json"))["format"] == "surface-spec-v1");
    CHECK(nlohmann::json::parse(slurp(dir / "hexagons.json"))["format"] == "hexagons-v1");
    const std::string first = slurp(dir / "hexagons.json") + slurp(dir / "ledger.json") + slurp(dir / "surface.json");
    REQUIRE(run(cmd_build, cfg) == 0);
    CHECK(slurp(dir / "hexagons.json") + slurp(dir / "ledger.json") + slurp(dir / "surface.json") == first);
}

TEST_CASE("input errors exit with code 2") {
    const fs::path dir = fresh_dir("input");
    fs::create_directories(dir);
    std::ofstream(dir / "bad_surface.json") << "{\"genus\": 2, \"pants_edges\": [[0,1],";
    std::ofstream(dir / "config.json") << "{\"surface\": \"bad_surface.json\"}";
    std::ostringstream err;
    CHECK(run_guarded([&] { return cmd_build(load_run_config((dir / "config.json").string()), err); }, err) == 2);
    CHECK(err.str().find("parse error") != std::string::npos);

    std::string msg;
    CHECK(run(cmd_census, config_in(dir / "nothing", 3.0), &msg) == 2);
    CHECK(msg.find("gcl build") != std::string::npos);
}

TEST_CASE("census is deterministic and matches the bound counts") {
    const fs::path dir = fresh_dir("census");
    RunConfig cfg = config_in(dir, 5.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    REQUIRE(run(cmd_census, cfg) == 0);
    const std::string one = slurp(dir / "census.csv");
    cfg.threads = 3;
    REQUIRE(run(cmd_census, cfg) == 0);
    CHECK(slurp(dir / "census.csv") == one);
    CHECK(one.rfind("# fnv1a64 ") != std::string::npos);

    const std::vector<CensusEntry> rows = parse_census_csv(strip_checksum(one));
    std::vector<CensusRow> cr;
    for (const CensusEntry& e : rows) cr.push_back({e.length, e.self_int});
    CHECK(count_P(cr, 5.0, 5.0, kEpsInfinity) == static_cast<long long>(rows.size()));

    // Independent recount straight from the CSV text.
    std::istringstream in(strip_checksum(one));
    std::string line;
    std::getline(in, line);
    long long recount = 0;
    while (std::getline(in, line)) {
        const double length = std::stod(line.substr(0, line.find(',')));
        std::size_t pos = 0;
        for (int k = 0; k < 4; ++k) pos = line.find(',', pos) + 1;
        const long long self = std::stoll(line.substr(pos, line.find(',', pos) - pos));
        recount += length <= 5.0 && self <= 0.05 * 25.0;
    }
    CHECK(count_P(cr, 5.0, 5.0, 0.05) == recount);
    CHECK(recount > 0);
}

TEST_CASE("census refuses partial output past the budget") {
    const fs::path dir = fresh_dir("budget");
    RunConfig cfg = config_in(dir, 5.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    cfg.tile_budget = 50;
    CHECK(run(cmd_census, cfg) == 4);
    CHECK_FALSE(fs::exists(dir / "census.csv"));
}

TEST_CASE("verify") {
    const fs::path dir = fresh_dir("verify");
    RunConfig cfg = config_in(dir, 4.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    CHECK(run(cmd_verify, cfg) == 3);
    REQUIRE(run(cmd_census, cfg) == 0);
    CHECK(run(cmd_verify, cfg) == 0);
    const nlohmann::json v = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(v["passed"] == true);
    CHECK(v["families"].size() == 7);

    // Tampering with the census is caught by its checksum.
    std::string text = slurp(dir / "census.csv");
    text[text.find(",0,") + 1] = '7';
    std::ofstream(dir / "census.csv", std::ios::binary | std::ios::trunc) << text;
    CHECK(run(cmd_verify, cfg) == 2);

    cfg.max_length = 1.0;
    REQUIRE(run(cmd_census, cfg) == 0);
    CHECK(run(cmd_verify, cfg) == 3);
}

TEST_CASE("verify catches a modifier without proper ordering") {
    const fs::path dir = fresh_dir("fault");
    RunConfig cfg = config_in(dir, 6.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    REQUIRE(run(cmd_census, cfg) == 0);
    cfg.inject_fault = "skip-proper-ordering";
    CHECK(run(cmd_verify, cfg) == 1);
    const nlohmann::json v = nlohmann::json::parse(slurp(dir / "verify.json"));
    CHECK(v["passed"] == false);
    bool found = false;
    for (const auto& f : v["families"]) {
        if (f["name"] != "phi_type_elimination") continue;
        CHECK(f["passed"] == false);
        CHECK(f["counterexample"]["word"].size() > 0);
        found = true;
    }
    CHECK(found);
}

TEST_CASE("bounds tables") {
    const fs::path dir = fresh_dir("bounds");
    RunConfig cfg = config_in(dir, 5.0);
    CHECK(run(cmd_bounds, cfg) == 2);
    REQUIRE(run(cmd_build, cfg) == 0);
    REQUIRE(run(cmd_census, cfg) == 0);
    REQUIRE(run(cmd_bounds, cfg) == 0);
    const std::string report = slurp(dir / "report.md");
    CHECK(report.find("Non-asymptotic evidence only") != std::string::npos);
    REQUIRE(run(cmd_bounds, cfg) == 0);
    CHECK(slurp(dir / "report.md") == report);

    std::istringstream ent(slurp(dir / "entropy.dat"));
    std::string line;
    std::getline(ent, line);
    double i = -1.0, h = -1.0;
    ent >> i >> h;
    CHECK(i == 0.0);
    CHECK(h == 0.0);

    const ConstantsLedger led = constants_ledger(2, 2.0);
    std::istringstream csv(strip_checksum(slurp(dir / "bounds.csv")));
    std::getline(csv, line);
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream f(line);
        std::string eps, T, count, logc, logb, margin, status;
        std::getline(f, eps, ',');
        std::getline(f, T, ',');
        std::getline(f, count, ',');
        std::getline(f, logc, ',');
        std::getline(f, logb, ',');
        std::getline(f, margin, ',');
        std::getline(f, status, ',');
        const double e = std::stod(eps), t = std::stod(T);
        CHECK(std::stod(logb) ==
              doctest::Approx(led.bg_bound * std::sqrt(e) * t * std::log(led.bX_bound / std::sqrt(e))).epsilon(1e-10));
        CHECK(status == "holds");
        ++rows;
    }
    CHECK(rows == 9);

    RunConfig direct = config_in(fresh_dir("bounds-direct"), 5.0);
    direct.genus = 3;
    direct.sys = 1.0;
    CHECK(run(cmd_bounds, direct) == 0);
    CHECK(slurp(fs::path(direct.outputs) / "bounds.csv").find("no-census") != std::string::npos);
}

TEST_CASE("words") {
    const fs::path dir = fresh_dir("words");
    RunConfig cfg = config_in(dir, 6.0);
    REQUIRE(run(cmd_build, cfg) == 0);
    REQUIRE(run(cmd_words, cfg) == 0);
    const nlohmann::json w = nlohmann::json::parse(slurp(dir / "words.json"));
    int coded = 0;
    for (const auto& e : w["words"]) {
        if (!e.contains("roundtrip")) continue;
        CHECK(e["roundtrip"] == true);
        ++coded;
    }
    CHECK(coded > 20);
}
