#include "gcl/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "gcl/census.hpp"
#include "gcl/coder.hpp"
#include "gcl/intersection.hpp"
#include "gcl/modifier.hpp"
#include "gcl/parallel.hpp"

namespace gcl {

namespace fs = std::filesystem;

namespace {

const char* const kCensusHeader = "length,word,primitive,power,self_int,method,n_type1,n_type2a,n_type2b,n_type3";

std::string fixed(double x, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string general(double x, int digits = 12) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const fs::path& p) {
    const std::string text = read_file(p);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, p.string() + ": " + e.what());
    }
}

void write_file(const fs::path& p, const std::string& content, std::ostream& log) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidSpec, "cannot write " + p.string());
    out << content;
    log << "wrote " << p.string() << "\n";
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

struct Built {
    SurfaceSpec spec;
    Holonomy hol;
    HexagonDecomposition dec;
    ConstantsLedger ledger;
};

Built load_built(const RunConfig& cfg) {
    const fs::path dir(cfg.outputs);
    if (!fs::exists(dir / "surface.json") || !fs::exists(dir / "ledger.json")) {
        throw Error(ErrorKind::InvalidSpec, "no surface artifacts in " + cfg.outputs + "; run `gcl build` first");
    }
    Built b;
    b.spec = load_surface_spec((dir / "surface.json").string());
    b.hol = build_holonomy(b.spec);
    b.dec = build_hexagon_decomposition(b.spec, b.hol);
    const nlohmann::json lj = read_json(dir / "ledger.json");
    try {
        b.ledger = constants_ledger(lj.at("genus").get<int>(), lj.at("sys").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, "ledger.json: " + std::string(e.what()));
    }
    return b;
}

struct CensusFiles {
    double max_length = 0.0;
    std::vector<CensusEntry> rows;
    std::string checksum;
};

std::optional<CensusFiles> load_census(const RunConfig& cfg) {
    const fs::path dir(cfg.outputs);
    if (!fs::exists(dir / "census.json") || !fs::exists(dir / "census.csv")) return std::nullopt;
    CensusFiles c;
    const nlohmann::json meta = read_json(dir / "census.json");
    try {
        c.max_length = meta.at("max_length").get<double>();
        c.checksum = meta.at("checksum").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, "census.json: " + std::string(e.what()));
    }
    const std::string text = read_file(dir / "census.csv");
    c.rows = parse_census_csv(strip_checksum(text));
    if (hex64(fnv1a64(strip_checksum(text))) != c.checksum) {
        throw Error(ErrorKind::InvalidSpec, "census.csv does not match census.json");
    }
    return c;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

void check_sorted(const std::vector<double>& v, const char* name) {
    if (!std::is_sorted(v.begin(), v.end())) throw Error(ErrorKind::InvalidSpec, std::string(name) + " must be ascending");
}

nlohmann::json labels(const std::vector<int>& letters) {
    nlohmann::json a = nlohmann::json::array();
    for (int l : letters) a.push_back(HexagonDecomposition::label(l));
    return a;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidSpec:
        case ErrorKind::NotHyperbolic:
        case ErrorKind::DegenerateSpec:
        case ErrorKind::DegenerateDecomposition:
        case ErrorKind::GuardViolated:
        case ErrorKind::TooLarge:
            return kExitInput;
        case ErrorKind::InsufficientData:
        case ErrorKind::IncompleteCensus:
            return kExitInsufficient;
        case ErrorKind::BudgetExceeded:
            return kExitBudget;
        default:
            return kExitFailure;
    }
}

void RunConfig::validate() const {
    surface.validate();
    if (!(max_length > 0.0)) throw Error(ErrorKind::InvalidSpec, "max_length must be positive");
    check_sorted(eps_grid, "eps_grid");
    check_sorted(T_grid, "T_grid");
    check_sorted(i_cc_grid, "i_cc_grid");
    check_sorted(admissible_eps, "admissible_eps");
    for (double e : eps_grid) {
        if (!(e > 0.0)) throw Error(ErrorKind::InvalidSpec, "eps values must be positive");
    }
    if (tile_budget == 0) throw Error(ErrorKind::InvalidSpec, "tile budget must be positive");
    if (admissible_n_max < 1) throw Error(ErrorKind::InvalidSpec, "admissible_n_max must be positive");
    if (threads < 1) throw Error(ErrorKind::InvalidSpec, "threads must be positive");
    if (genus && *genus < 2) throw Error(ErrorKind::InvalidSpec, "genus must be at least 2");
    if (sys && !(*sys > 0.0)) throw Error(ErrorKind::InvalidSpec, "sys must be positive");
    if (!inject_fault.empty() && inject_fault != "skip-proper-ordering") {
        throw Error(ErrorKind::InvalidSpec, "unknown fault " + inject_fault);
    }
}

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::string& base_dir) {
    RunConfig c;
    try {
        if (!j.is_object()) throw Error(ErrorKind::InvalidSpec, "config must be a JSON object");
        for (const auto& [key, v] : j.items()) {
            if (key == "format") {
                if (v != "gcl-config-v1") throw Error(ErrorKind::InvalidSpec, "unsupported config format " + v.dump());
            } else if (key == "surface") {
                c.surface = v.is_string() ? load_surface_spec((fs::path(base_dir) / v.get<std::string>()).string())
                                          : SurfaceSpec::from_json(v);
            } else if (key == "max_length") {
                c.max_length = v.get<double>();
            } else if (key == "eps_grid") {
                c.eps_grid = v.get<std::vector<double>>();
            } else if (key == "T_grid") {
                c.T_grid = v.get<std::vector<double>>();
            } else if (key == "i_cc_grid") {
                c.i_cc_grid = v.get<std::vector<double>>();
            } else if (key == "admissible_eps") {
                c.admissible_eps = v.get<std::vector<double>>();
            } else if (key == "admissible_n_max") {
                c.admissible_n_max = v.get<int>();
            } else if (key == "outputs") {
                c.outputs = (fs::path(base_dir) / v.get<std::string>()).string();
            } else if (key == "seed") {
                c.seed = v.get<std::uint64_t>();
            } else if (key == "budgets") {
                c.tile_budget = v.at("tiles").get<std::size_t>();
            } else if (key == "threads") {
                c.threads = v.get<int>();
            } else if (key == "nudge_twists") {
                c.nudge_twists = v.get<bool>();
            } else if (key == "genus") {
                c.genus = v.get<int>();
            } else if (key == "sys") {
                c.sys = v.get<double>();
            } else {
                throw Error(ErrorKind::InvalidSpec, "unknown config key " + key);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j{{"format", "gcl-config-v1"},
                     {"surface", surface.to_json()},
                     {"max_length", max_length},
                     {"eps_grid", eps_grid},
                     {"T_grid", T_grid},
                     {"i_cc_grid", i_cc_grid},
                     {"admissible_eps", admissible_eps},
                     {"admissible_n_max", admissible_n_max},
                     {"outputs", outputs},
                     {"seed", seed},
                     {"budgets", {{"tiles", tile_budget}}},
                     {"threads", threads},
                     {"nudge_twists", nudge_twists}};
    if (genus) j["genus"] = *genus;
    if (sys) j["sys"] = *sys;
    return j;
}

RunConfig load_run_config(const std::string& path) {
    const nlohmann::json j = read_json(path);
    return RunConfig::from_json(j, fs::path(path).parent_path().string());
}

SurfaceSpec nudged(const SurfaceSpec& spec) {
    SurfaceSpec s = spec;
    for (double& t : s.twists) t = t + 1e-3 <= 0.5 ? t + 1e-3 : t - 1e-3;
    return s;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string with_checksum(const std::string& body) { return body + "# fnv1a64 " + hex64(fnv1a64(body)) + "\n"; }

std::string strip_checksum(const std::string& text) {
    const std::string tag = "# fnv1a64 ";
    const std::size_t pos = text.rfind(tag);
    if (pos == std::string::npos || (pos > 0 && text[pos - 1] != '\n')) {
        throw Error(ErrorKind::InvalidSpec, "missing checksum line");
    }
    const std::string body = text.substr(0, pos);
    std::string stored = text.substr(pos + tag.size());
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
    if (stored != hex64(fnv1a64(body))) throw Error(ErrorKind::InvalidSpec, "checksum mismatch");
    return body;
}

std::string census_csv(const std::vector<CensusEntry>& rows) {
    std::string out = std::string(kCensusHeader) + "\n";
    for (const CensusEntry& r : rows) {
        out += fixed(r.length) + "," + r.word + "," + (r.primitive ? "1" : "0") + "," + std::to_string(r.power) +
               "," + std::to_string(r.self_int) + "," + (r.from_chords ? "chords" : "linking");
        for (long long t : r.by_type) out += "," + (r.from_chords ? std::to_string(t) : std::string());
        out += "\n";
    }
    return out;
}

std::vector<CensusEntry> parse_census_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCensusHeader) throw Error(ErrorKind::InvalidSpec, "census header mismatch");
    std::vector<CensusEntry> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 10) throw Error(ErrorKind::InvalidSpec, "census row with " + std::to_string(f.size()) + " fields");
        CensusEntry r;
        try {
            r.length = std::stod(f[0]);
            r.word = f[1];
            r.primitive = f[2] == "1";
            r.power = std::stoi(f[3]);
            r.self_int = std::stoll(f[4]);
            r.from_chords = f[5] == "chords";
            for (int k = 0; k < 4; ++k) r.by_type[k] = f[6 + k].empty() ? 0 : std::stoll(f[6 + k]);
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidSpec, "malformed census row: " + line);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CensusEntry> compute_census(const HexagonDecomposition& dec, const ConstantsLedger& ledger,
                                        const RunConfig& cfg) {
    CensusOptions opts;
    opts.primitive_only = false;
    opts.budget = cfg.tile_budget;
    opts.threads = cfg.threads;
    const std::vector<ClosedGeodesic> classes = enumerate_geodesics(dec, cfg.max_length, opts);
    const IntersectionEngine engine(dec, ledger.sys);
    std::vector<CensusEntry> rows(classes.size());
    parallel_for(static_cast<int>(classes.size()), cfg.threads, [&](int i) {
        const ClosedGeodesic& c = classes[i];
        const IntersectionCount ic = engine.self_intersection(c);
        CensusEntry& r = rows[i];
        r.length = c.length;
        r.word = c.word_string();
        r.primitive = c.primitive;
        r.power = c.power;
        r.self_int = ic.total;
        r.from_chords = ic.from_chords;
        r.by_type = ic.by_type;
    });
    std::sort(rows.begin(), rows.end(), [](const CensusEntry& a, const CensusEntry& b) {
        return a.length != b.length ? a.length < b.length : a.word < b.word;
    });
    return rows;
}

nlohmann::json FamilyResult::to_json() const {
    nlohmann::json j{{"name", name},
                     {"passed", passed},
                     {"checked", checked},
                     {"skipped", skipped},
                     {"worst_margin", worst_margin}};
    if (!counterexample.is_null()) j["counterexample"] = counterexample;
    return j;
}

std::vector<FamilyResult> verify_families(const HexagonDecomposition& dec, const ConstantsLedger& ledger,
                                          double max_length, const RunConfig& cfg) {
    CensusOptions opts;
    opts.primitive_only = false;
    opts.budget = cfg.tile_budget;
    opts.threads = cfg.threads;
    const std::vector<ClosedGeodesic> classes = enumerate_geodesics(dec, max_length, opts);
    if (classes.empty()) throw Error(ErrorKind::InsufficientData, "empty census");
    const IntersectionEngine engine(dec, ledger.sys);
    PhiOptions phi_opts;
    phi_opts.proper_ordering = cfg.inject_fault != "skip-proper-ordering";

    struct PerClass {
        bool codable = false;
        SymbolicWord w;
        long long self = 0;
        IntersectionCount chords, phi;
        long long linking = 0;
        bool roundtrip = false;
    };
    std::vector<PerClass> per(classes.size());
    parallel_for(static_cast<int>(classes.size()), cfg.threads, [&](int i) {
        const ClosedGeodesic& c = classes[i];
        PerClass& p = per[i];
        p.self = engine.self_intersection(c).total;
        try {
            p.w = code_word(c.matrix, dec);
            p.codable = true;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OnSkeleton) throw;
            return;
        }
        if (!c.primitive) return;
        p.chords = count_from(classify_crossings(dec, p.w.chords));
        p.linking = engine.linking_self(c.matrix);
        const ModifiedCurve mc = build_phi(dec, p.w, phi_opts);
        p.phi = mc.crossings;
        p.roundtrip = cyclically_equal(reconstruct_word(dec, extract_edge_words(dec, build_phi(dec, p.w))).letters,
                                       p.w.letters);
    });

    auto family = [](const char* name) {
        FamilyResult f;
        f.name = name;
        return f;
    };
    FamilyResult lcom = family("lcom_bound"), phi_types = family("phi_type_elimination"),
                 mono = family("type2_monotone"), dual = family("dual_intersection"),
                 adm = family("admissible_bound"), inter = family("interaction_strength"),
                 recon = family("edge_word_roundtrip");
    auto observe = [](FamilyResult& f, double margin, const std::function<nlohmann::json()>& example) {
        margin += 0.0;
        if (f.checked == 0 || margin < f.worst_margin) f.worst_margin = margin;
        ++f.checked;
        if (margin < 0.0 && f.passed) {
            f.passed = false;
            f.counterexample = example();
        }
    };

    for (std::size_t i = 0; i < classes.size(); ++i) {
        const ClosedGeodesic& c = classes[i];
        const PerClass& p = per[i];
        auto example = [&](nlohmann::json extra) {
            return [&c, &p, extra] {
                nlohmann::json j{{"class", c.word_string()}, {"length", c.length}};
                if (p.codable) j["word"] = labels(p.w.letters);
                j.update(extra);
                return j;
            };
        };
        observe(inter, ledger.I_bound * c.length * c.length - static_cast<double>(p.self),
                example({{"self_int", p.self}, {"bound", ledger.I_bound * c.length * c.length}}));
        if (!p.codable) {
            ++lcom.skipped, ++phi_types.skipped, ++mono.skipped, ++dual.skipped, ++recon.skipped;
            continue;
        }
        const int lc = combinatorial_length(p.w);
        observe(lcom, ledger.cX_bound * c.length - lc, example({{"lcom", lc}, {"bound", ledger.cX_bound * c.length}}));
        if (!c.primitive) {
            ++phi_types.skipped, ++mono.skipped, ++dual.skipped, ++recon.skipped;
            continue;
        }
        const auto& pt = p.phi.by_type;
        const auto& ot = p.chords.by_type;
        observe(phi_types, -static_cast<double>(pt[1] + pt[3]), example({{"phi_crossings", p.phi.to_json()}}));
        observe(mono, static_cast<double>((ot[1] + ot[2]) - (pt[1] + pt[2])),
                example({{"phi_crossings", p.phi.to_json()}, {"chord_crossings", p.chords.to_json()}}));
        observe(dual, -std::abs(static_cast<double>(p.chords.total - p.linking)),
                example({{"chords", p.chords.total}, {"linking", p.linking}}));
        observe(recon, p.roundtrip ? 0.0 : -1.0, example({{"reason", "round trip changed the word"}}));
    }

    // Corrupted edge words must never reconstruct the original word.
    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (per[i].codable && classes[i].primitive) usable.push_back(i);
    }
    std::mt19937_64 rng(cfg.seed);
    int mutations = 0;
    for (int trial = 0; !usable.empty() && mutations < 100 && trial < 10000; ++trial) {
        const SymbolicWord& w = per[usable[trial % usable.size()]].w;
        EdgeWords ew = extract_edge_words(dec, build_phi(dec, w));
        std::vector<std::pair<int, bool>> candidates;
        for (std::size_t s = 0; s < ew.outgoing.size(); ++s) {
            auto distinct = [](const std::vector<int>& v) {
                return std::any_of(v.begin(), v.end(), [&](int l) { return l != v.front(); });
            };
            if (distinct(ew.outgoing[s])) candidates.emplace_back(static_cast<int>(s), true);
            if (distinct(ew.incoming[s])) candidates.emplace_back(static_cast<int>(s), false);
        }
        if (candidates.empty()) continue;
        const auto [s, outgoing] = candidates[rng() % candidates.size()];
        std::vector<int>& v = outgoing ? ew.outgoing[s] : ew.incoming[s];
        const std::size_t a = rng() % v.size(), b = rng() % v.size();
        if (v[a] == v[b]) continue;
        std::swap(v[a], v[b]);
        ++mutations;
        bool silent = false;
        try {
            silent = cyclically_equal(reconstruct_word(dec, ew).letters, w.letters);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InconsistentWords) throw;
        }
        observe(recon, silent ? -1.0 : 0.0, [&] {
            return nlohmann::json{{"word", labels(w.letters)}, {"reason", "corrupted edge words reconstructed it"}};
        });
    }

    for (Shape shape : {Shape::Triangle, Shape::Hexagon}) {
        for (int n = 1; n <= cfg.admissible_n_max; ++n) {
            for (double eps : cfg.admissible_eps) {
                AdmissibleQuery q{n, eps, shape, cfg.admissible_n_max, cfg.threads};
                if (!(eps < 1.0) || eps * n * n < 1.0) {
                    ++adm.skipped;
                    continue;
                }
                const double exact = static_cast<double>(count_admissible_exact(q));
                const AdmissibleBound bound = admissible_bound(q);
                observe(adm, bound.log_value - std::log(exact), [&] {
                    return nlohmann::json{{"shape", shape == Shape::Hexagon ? "hexagon" : "triangle"},
                                          {"n", n},
                                          {"eps", eps},
                                          {"exact", exact},
                                          {"bound", bound.value}};
                });
            }
        }
    }
    return {lcom, phi_types, mono, dual, adm, inter, recon};
}

int cmd_build(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const SurfaceSpec spec = cfg.nudge_twists ? nudged(cfg.surface) : cfg.surface;
    const Holonomy hol = build_holonomy(spec);
    const HexagonDecomposition dec = build_hexagon_decomposition(spec, hol);
    const ConstantsLedger ledger = constants_ledger(spec, hol);
    const fs::path dir(cfg.outputs);
    write_file(dir / "surface.json", dump(spec.to_json()), log);
    write_file(dir / "hexagons.json", dump(dec.to_json()), log);
    write_file(dir / "ledger.json", dump(ledger.to_json()), log);
    return kExitOk;
}

int cmd_census(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const Built b = load_built(cfg);
    const std::vector<CensusEntry> rows = compute_census(b.dec, b.ledger, cfg);
    const std::string body = census_csv(rows);
    const fs::path dir(cfg.outputs);
    write_file(dir / "census.csv", with_checksum(body), log);
    const nlohmann::json meta{{"format", "census-meta-v1"},
                              {"max_length", cfg.max_length},
                              {"rows", rows.size()},
                              {"checksum", hex64(fnv1a64(body))}};
    write_file(dir / "census.json", dump(meta), log);
    log << rows.size() << " classes up to length " << general(cfg.max_length) << "\n";
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const Built b = load_built(cfg);
    const std::optional<CensusFiles> census = load_census(cfg);
    if (!census) throw Error(ErrorKind::InsufficientData, "no census in " + cfg.outputs + "; run `gcl census` first");
    if (census->rows.empty()) throw Error(ErrorKind::InsufficientData, "empty census");
    const std::vector<FamilyResult> families = verify_families(b.dec, b.ledger, census->max_length, cfg);
    bool ok = true;
    nlohmann::json fam = nlohmann::json::array();
    for (const FamilyResult& f : families) {
        ok = ok && f.passed;
        fam.push_back(f.to_json());
        log << (f.passed ? "PASS " : "FAIL ") << f.name << " (checked " << f.checked << ", worst margin "
            << general(f.worst_margin, 6) << ")\n";
        if (!f.passed) log << "  counterexample: " << f.counterexample.dump() << "\n";
    }
    const nlohmann::json report{{"format", "verify-v1"},
                                {"max_length", census->max_length},
                                {"census_checksum", census->checksum},
                                {"seed", cfg.seed},
                                {"passed", ok},
                                {"families", fam}};
    write_file(fs::path(cfg.outputs) / "verify.json", dump(report), log);
    return ok ? kExitOk : kExitFailure;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const fs::path dir(cfg.outputs);
    ConstantsLedger ledger;
    if (cfg.genus || cfg.sys) {
        if (!cfg.genus || !cfg.sys) throw Error(ErrorKind::InvalidSpec, "genus and sys go together");
        ledger = constants_ledger(*cfg.genus, *cfg.sys);
    } else if (fs::exists(dir / "ledger.json")) {
        const nlohmann::json lj = read_json(dir / "ledger.json");
        try {
            ledger = constants_ledger(lj.at("genus").get<int>(), lj.at("sys").get<double>());
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::InvalidSpec, "ledger.json: " + std::string(e.what()));
        }
    } else {
        throw Error(ErrorKind::InvalidSpec, "no ledger.json; run `gcl build` or pass --genus and --sys");
    }
    const std::optional<CensusFiles> census = load_census(cfg);

    std::string entropy_dat = "# i_cc entropy_bound\n";
    for (double i : cfg.i_cc_grid) entropy_dat += general(i, 17) + " " + general(entropy_bound(i, ledger), 17) + "\n";

    std::vector<CensusRow> rows;
    if (census) {
        for (const CensusEntry& e : census->rows) rows.push_back({e.length, e.self_int});
    }
    std::string csv = "eps,T,census_count,log_census_count,log_thm_bound,margin,status\n";
    std::string table;
    std::map<double, std::string> series;
    int fails = 0;
    for (double eps : cfg.eps_grid) {
        for (double T : cfg.T_grid) {
            if (!census || T > census->max_length + 1e-12) {
                csv += general(eps) + "," + general(T) + ",,,,,no-census\n";
                table += "| " + general(eps) + " | " + general(T) + " | | | | | no census |\n";
                continue;
            }
            const BoundReport r = census_P(rows, census->max_length, T, eps, ledger);
            const double log_count = r.census_count > 0 ? std::log(static_cast<double>(r.census_count)) : 0.0;
            const double margin = r.log_thm_bound - log_count;
            const std::string status = r.large_T_ok ? "holds" : "fails";
            fails += !r.large_T_ok;
            csv += general(eps) + "," + general(T) + "," + std::to_string(r.census_count) + "," + general(log_count) +
                   "," + general(r.log_thm_bound) + "," + general(margin) + "," + status + "\n";
            table += "| " + general(eps) + " | " + general(T) + " | " + std::to_string(r.census_count) + " | " +
                     general(log_count, 6) + " | " + general(r.log_thm_bound, 6) + " | " + general(margin, 6) +
                     " | " + status + " |\n";
            series[eps] += general(T, 17) + " " + std::to_string(r.census_count) + "\n";
        }
    }

    std::string md = "# gcl report\n\n";
    md += "Non-asymptotic evidence only. The census bound is claimed for large T; the rows below check it at "
          "desk-scale lengths and say nothing about the limit.\n\n";
    md += "## Constants\n\n| name | value |\n|---|---|\n";
    const nlohmann::json lj = ledger.to_json();
    for (const auto& [k, v] : lj.items()) {
        if (k == "format") continue;
        md += "| " + k + " | " + (v.is_number_float() ? general(v.get<double>()) : v.dump()) + " |\n";
    }
    md += "\n## Census\n\n";
    if (census) {
        long long simple = 0, max_i = 0;
        for (const CensusEntry& e : census->rows) {
            simple += e.self_int == 0;
            max_i = std::max(max_i, e.self_int);
        }
        md += "- max length: " + general(census->max_length) + "\n";
        md += "- classes: " + std::to_string(census->rows.size()) + "\n";
        md += "- simple classes: " + std::to_string(simple) + "\n";
        md += "- largest self-intersection: " + std::to_string(max_i) + "\n";
        md += "- census.csv checksum: " + census->checksum + "\n";
    } else {
        md += "No census found in the output directory.\n";
    }
    md += "\n## Census count against (bX/sqrt(eps))^(bg sqrt(eps) T)\n\n";
    md += "Margin is log bound minus log count.\n\n";
    md += "| eps | T | P | log P | log bound | margin | status |\n|---|---|---|---|---|---|---|\n" + table;
    md += "\n## Entropy bound\n\n| i_cc | bound |\n|---|---|\n";
    for (double i : cfg.i_cc_grid) md += "| " + general(i) + " | " + general(entropy_bound(i, ledger)) + " |\n";
    if (fs::exists(dir / "verify.json")) {
        const nlohmann::json v = read_json(dir / "verify.json");
        md += "\n## Verification\n\n| family | result | checked | worst margin |\n|---|---|---|---|\n";
        for (const nlohmann::json& f : v.at("families")) {
            md += "| " + f.at("name").get<std::string>() + " | " + (f.at("passed").get<bool>() ? "PASS" : "FAIL") +
                  " | " + std::to_string(f.at("checked").get<long long>()) + " | " +
                  general(f.at("worst_margin").get<double>(), 6) + " |\n";
        }
    }

    write_file(dir / "bounds.csv", with_checksum(csv), log);
    write_file(dir / "entropy.dat", entropy_dat, log);
    for (const auto& [eps, data] : series) {
        write_file(dir / ("census_eps_" + general(eps) + ".dat"), "# T census_count\n" + data, log);
    }
    write_file(dir / "report.md", md, log);
    if (fails) log << fails << " census rows exceed the bound\n";
    return kExitOk;
}

int cmd_words(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const Built b = load_built(cfg);
    CensusOptions opts;
    opts.primitive_only = false;
    opts.budget = cfg.tile_budget;
    opts.threads = cfg.threads;
    const std::vector<ClosedGeodesic> classes = enumerate_geodesics(b.dec, cfg.max_length, opts);
    std::vector<nlohmann::json> out(classes.size());
    parallel_for(static_cast<int>(classes.size()), cfg.threads, [&](int i) {
        const ClosedGeodesic& c = classes[i];
        nlohmann::json j{{"class", c.word_string()}, {"length", c.length}, {"primitive", c.primitive}};
        try {
            const SymbolicWord w = code_word(c.matrix, b.dec);
            j["word"] = labels(w.letters);
            j["lcom"] = combinatorial_length(w);
            if (c.primitive) {
                const ModifiedCurve mc = build_phi(b.dec, w);
                const EdgeWords ew = extract_edge_words(b.dec, mc);
                j["phi_crossings"] = mc.crossings.to_json();
                j["edge_words"] = ew.to_json();
                j["roundtrip"] = cyclically_equal(reconstruct_word(b.dec, ew).letters, w.letters);
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::OnSkeleton) throw;
            j["skeleton"] = true;
        }
        out[i] = std::move(j);
    });
    std::sort(out.begin(), out.end(), [](const nlohmann::json& a, const nlohmann::json& b) {
        const double la = a["length"], lb = b["length"];
        return la != lb ? la < lb : a["class"].get<std::string>() < b["class"].get<std::string>();
    });
    const nlohmann::json doc{{"format", "words-v1"}, {"max_length", cfg.max_length}, {"words", out}};
    write_file(fs::path(cfg.outputs) / "words.json", dump(doc), log);
    log << out.size() << " classes\n";
    return kExitOk;
}

int run_guarded(const std::function<int()>& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "gcl: " << e.what() << "\n";
        if (e.kind() == ErrorKind::VertexDegeneracy || e.kind() == ErrorKind::EdgeAmbiguity) {
            err << "gcl: rebuild with --nudge-twists to perturb the surface\n";
        }
        return exit_code_for(e.kind());
    } catch (const nlohmann::json::exception& e) {
        err << "gcl: parse error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        err << "gcl: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "gcl: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace gcl
