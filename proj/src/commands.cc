// Copyright 2026 The sdiqrng Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdiqrng/commands.h"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdiqrng/adversary.h"
#include "sdiqrng/philox.h"
#include "sdiqrng/table.h"

namespace sdiqrng {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::AbortedRun:
            return kExitAbort;
        case ErrorKind::Io:
            return kExitIo;
        default:
            return kExitValidation;
    }
}

namespace {

constexpr uint64_t kSeedStream = 0x546f65706c69747aULL;

/// Failure to create the directory surfaces as an Io error on open.
void make_parent(const fs::path &path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
}

void write_bits_at(const fs::path &path, const BitBuffer &bits) {
    make_parent(path);
    write_bits_file(path, bits);
}

void write_text(const fs::path &path, const std::string &text) {
    make_parent(path);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) {
        throw Error(ErrorKind::Io, "failed to write " + path.string());
    }
}

json read_json(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::Io, path.string() + " is not valid JSON: " + e.what());
    }
}

template <typename T>
T json_field(const json &doc, const char *key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw Error(ErrorKind::Io, std::string("document lacks field '") + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::Io, std::string("field '") + key + "': " + e.what());
    }
}

/// The output directory is not part of the run, so artifacts stay
/// byte-identical wherever they are written.
json echoed_config(const RunConfig &config) {
    json doc = config_to_json(config);
    doc.erase("out_dir");
    return doc;
}

}  // namespace

json stats_to_json(const RunConfig &config, const ExpectationStats &stats, uint64_t raw_bit_count) {
    json settings = json::array();
    for (int s = 0; s < 3; ++s) {
        settings.push_back({
            {"setting", s},
            {"count_b0", stats.count_b0[s]},
            {"count_b1", stats.count_b1[s]},
            {"n_test", stats.n_test(s)},
            {"ge", stats.ge(s)},
        });
    }
    return json{
        {"config_hash", hex64(config_hash(config))},
        {"config", echoed_config(config)},
        {"n_rounds", config.n_rounds},
        {"master_seed", config.master_seed},
        {"n_gen_rounds", stats.n_gen_rounds},
        {"raw_bits", raw_bit_count},
        {"tests", settings},
    };
}

ExpectationStats stats_from_json(const json &doc) {
    ExpectationStats stats;
    stats.n_gen_rounds = json_field<uint64_t>(doc, "n_gen_rounds");
    auto tests = json_field<json>(doc, "tests");
    if (!tests.is_array() || tests.size() != 3) {
        throw Error(ErrorKind::Io, "stats document must list exactly three test settings");
    }
    for (const auto &entry : tests) {
        auto s = json_field<int>(entry, "setting");
        if (s < 0 || s > 2) {
            throw Error(ErrorKind::Io, "test setting index out of range");
        }
        stats.count_b0[s] = json_field<uint64_t>(entry, "count_b0");
        stats.count_b1[s] = json_field<uint64_t>(entry, "count_b1");
    }
    return stats;
}

json cmd_simulate(const RunConfig &config, unsigned workers, const fs::path &stats_path, const fs::path &raw_path) {
    config.validate();
    SimulationOptions options = config.simulation_options();
    options.workers = workers;
    SimulationResult result = run_protocol(config.source, config.detector, config.n_rounds, config.master_seed, options);
    json doc = stats_to_json(config, result.stats, result.raw_bits.size());
    write_bits_at(raw_path, result.raw_bits);
    write_text(stats_path, doc.dump(2) + "\n");
    return doc;
}

json cmd_bound(const json &stats_doc, const RunConfig &config) {
    config.validate();
    ExpectationStats stats = stats_from_json(stats_doc);
    SecurityBudget budget = config.budget();
    ExpectationTriple ge{stats.ge(0), stats.ge(1), stats.ge(2)};

    EntropyReport report;
    if (stats.n_test(0) == 0 || stats.n_test(1) == 0 || stats.n_test(2) == 0) {
        report.abort = AbortReason::NoTestData;
    } else {
        CBound c = c_bound_practical(ge, budget, config.prefactor);
        if (c.ok()) {
            report = final_length(c.value, budget, config.length_options());
        } else {
            report.abort = c.abort;
        }
    }

    json doc{
        {"config_hash", hex64(config_hash(config))},
        {"stats_config_hash", stats_doc.value("config_hash", std::string())},
        {"ge", {ge.g0, ge.g1, ge.g2}},
        {"mu", budget.mu},
        {"eta", budget.eta()},
        {"epsilon", budget.epsilon},
        {"epsilon_total", budget.epsilon_total()},
        {"n_total", budget.n_total},
        {"n_gen", budget.n_gen},
        {"n_test_per_state", budget.n_test_per_state},
        {"theta_t", budget.n_test_per_state > 0 ? budget.theta_t() : 0.0},
        {"theta_g", budget.n_gen > 0 ? budget.theta_g() : 0.0},
        {"sys_freq_hz", budget.sys_freq_hz},
        {"prefactor", std::string(to_string(config.prefactor))},
        {"conservative_eta", config.conservative_eta},
        {"c_bound", report.c_bound},
        {"p_guess", report.p_guess},
        {"min_entropy_bits", report.min_entropy_bits},
        {"length_bits", report.length_bits},
        {"rate_bps", report.rate_bps},
        {"aborted", report.aborted()},
        {"abort", report.abort ? json(std::string(to_string(*report.abort))) : json(nullptr)},
    };
    return doc;
}

uint64_t extraction_target(uint64_t l_bits, uint64_t n_gen, uint64_t n_raw) {
    if (n_gen == 0 || n_raw >= n_gen) {
        return std::min(l_bits, n_raw);
    }
    return static_cast<uint64_t>((static_cast<unsigned __int128>(l_bits) * n_raw) / n_gen);
}

BitBuffer generate_seed(uint64_t master_seed, uint64_t bit_count) {
    PhiloxStream stream(master_seed, kSeedStream);
    std::vector<uint64_t> words((bit_count + 63) / 64);
    for (auto &w : words) {
        w = stream.next_u64();
    }
    return BitBuffer::from_words(std::move(words), bit_count);
}

BlockPlan plan_extraction(const json &report, uint64_t n_raw, uint64_t block_bits) {
    if (json_field<bool>(report, "aborted")) {
        throw Error(ErrorKind::AbortedRun, "report is aborted; nothing may be extracted");
    }
    auto l = json_field<uint64_t>(report, "length_bits");
    auto n_gen = json_field<uint64_t>(report, "n_gen");
    uint64_t target = extraction_target(l, n_gen, n_raw);
    if (target == 0) {
        throw Error(ErrorKind::AbortedRun, "certified output length is zero");
    }
    return plan_blocks(n_raw, target, block_bits);
}

ExtractOutcome cmd_extract(const BitBuffer &raw, const json &report, const BitBuffer &seed, uint64_t block_bits) {
    ExtractOutcome out;
    out.plan = plan_extraction(report, raw.size(), block_bits);
    out.final_bits = extract_blocks(raw, out.plan, seed);
    uint64_t n_test_states = 3 * json_field<uint64_t>(report, "n_test_per_state");
    out.ledger = ledger(n_test_states, out.final_bits.size(), seed.size());
    out.ledger_doc = json{
        {"bits_consumed_extraction", out.ledger.bits_consumed_extraction},
        {"bits_consumed_test_selection", out.ledger.bits_consumed_test_selection},
        {"bits_produced", out.ledger.bits_produced},
        {"net_expansion", out.ledger.net_expansion},
        {"n_test_states", n_test_states},
        {"raw_bits", raw.size()},
        {"block_bits", block_bits},
        {"blocks", out.plan.blocks.size()},
        {"seed_bits", seed.size()},
        {"report_config_hash", report.value("config_hash", std::string())},
    };
    return out;
}

json report_to_json(const TestReport &report, uint64_t bit_count) {
    return json{
        {"test", report.test_name},
        {"p_value", report.p_value},
        {"alpha", report.alpha},
        {"passed", report.passed},
        {"bits", bit_count},
    };
}

namespace {

/// Flag overrides shared by the config-driven subcommands. Applied after the
/// config file and the environment.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<uint64_t> seed;
    std::optional<double> mu;
    std::optional<double> misalign_total;
    std::optional<double> p_test;
    std::optional<uint64_t> n_rounds;
    std::optional<double> epsilon_total;
    std::optional<uint64_t> n_total;
    std::optional<double> test_fraction;
    std::optional<double> sys_freq_hz;
    std::optional<double> reference_eff;
    std::optional<std::string> prefactor;
    bool conservative_eta = false;
    bool per_round_noise = false;
    std::optional<std::string> out_dir;

    void add_to(CLI::App *app, bool with_config) {
        if (with_config) {
            app->add_option("--config", config_path, "JSON run configuration");
        }
        app->add_option("--seed", seed, "Master seed (overrides config and QRNG_SEED)");
        app->add_option("--mu", mu, "Mean photon number per pulse");
        app->add_option("--misalign-total", misalign_total, "Total misalignment in radians, split evenly");
        app->add_option("--p-test", p_test, "Probability of each test state");
        app->add_option("--n-rounds", n_rounds, "Simulated rounds");
        app->add_option("--epsilon-total", epsilon_total, "Total failure probability");
        app->add_option("--n-total", n_total, "Budget round count N");
        app->add_option("--test-fraction", test_fraction, "Fraction of N spent on testing");
        app->add_option("--sys-freq", sys_freq_hz, "System repetition rate in Hz");
        app->add_option("--reference-eff", reference_eff, "Efficiency that mu is referenced to");
        app->add_option("--prefactor", prefactor, "fluctuation_aware or eta_only");
        app->add_flag("--conservative-eta", conservative_eta, "Use eta - theta_g for the min-entropy credit");
        app->add_flag("--per-round-noise", per_round_noise, "Sample modulation noise per round");
        app->add_option("--out-dir", out_dir, "Directory for output artifacts");
    }

    void apply(RunConfig &c) const {
        if (seed) c.master_seed = *seed;
        if (mu) c.source.mu = *mu;
        if (misalign_total) c.source.set_total_misalignment(*misalign_total);
        if (p_test) {
            c.source.p_test = *p_test;
            c.source.p_gen = 1 - 3 * *p_test;
        }
        if (n_rounds) c.n_rounds = *n_rounds;
        if (epsilon_total) c.epsilon_total = *epsilon_total;
        if (n_total) c.n_total = *n_total;
        if (test_fraction) c.test_fraction = *test_fraction;
        if (sys_freq_hz) c.sys_freq_hz = *sys_freq_hz;
        if (reference_eff) c.detector.reference_eff = *reference_eff;
        if (prefactor) c.prefactor = parse_prefactor_variant(*prefactor);
        if (conservative_eta) c.conservative_eta = true;
        if (per_round_noise) c.per_round_noise = true;
        if (out_dir) c.out_dir = *out_dir;
        c.validate();
    }

    RunConfig resolve(RunConfig base) const {
        if (config_path) {
            base = load_config(*config_path);
        }
        apply_env_overrides(base);
        apply(base);
        return base;
    }
};

fs::path pick(const std::optional<std::string> &explicit_path, const RunConfig &c, const char *name) {
    return explicit_path ? fs::path(*explicit_path) : fs::path(c.out_dir) / name;
}

uint64_t env_or_flag_seed(const std::optional<uint64_t> &flag) {
    RunConfig c;
    apply_env_overrides(c);
    return flag ? *flag : c.master_seed;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Semi-device-independent QRNG simulator, bound calculator and extractor", "sdiqrng"};
    app.require_subcommand(1);

    Overrides sim_o;
    unsigned sim_workers = 0;
    std::optional<std::string> sim_stats, sim_raw;
    auto *sim = app.add_subcommand("simulate", "Simulate the source and detectors; write stats.json and raw.bits");
    sim_o.add_to(sim, true);
    sim->add_option("--workers", sim_workers, "Worker threads (0 = hardware concurrency)");
    sim->add_option("--stats", sim_stats, "Output stats path");
    sim->add_option("--raw", sim_raw, "Output raw bits path");

    Overrides bound_o;
    std::string bound_stats;
    std::optional<std::string> bound_report;
    auto *bound = app.add_subcommand("bound", "Bound C and the certified length from stats.json; write report.json");
    bound_o.add_to(bound, true);
    bound->add_option("--stats", bound_stats, "Input stats path")->required();
    bound->add_option("--report", bound_report, "Output report path");

    std::string ex_raw, ex_report;
    std::optional<std::string> ex_seed_file, ex_gen_seed, ex_out, ex_ledger, ex_out_dir;
    std::optional<uint64_t> ex_seed_value;
    uint64_t ex_block = kDefaultBlockBits;
    auto *extract_cmd = app.add_subcommand("extract", "Toeplitz-hash raw bits down to the certified length");
    extract_cmd->add_option("--raw", ex_raw, "Input raw bits")->required();
    extract_cmd->add_option("--report", ex_report, "Input report.json")->required();
    auto *seed_file_opt = extract_cmd->add_option("--seed-file", ex_seed_file, "Toeplitz seed bits");
    auto *gen_seed_opt =
        extract_cmd->add_option("--generate-seed", ex_gen_seed, "Generate a seed of the right length at this path");
    seed_file_opt->excludes(gen_seed_opt);
    extract_cmd->add_option("--seed", ex_seed_value, "Master seed for --generate-seed");
    extract_cmd->add_option("--block-bits", ex_block, "Input bits per Toeplitz block");
    extract_cmd->add_option("--out", ex_out, "Output final bits path");
    extract_cmd->add_option("--ledger", ex_ledger, "Output ledger path");
    extract_cmd->add_option("--out-dir", ex_out_dir, "Directory for output artifacts");

    std::string rt_input;
    std::optional<std::string> rt_out;
    uint64_t rt_block = kDefaultBlockLen;
    double rt_alpha = kDefaultAlpha;
    bool rt_strict = false;
    auto *randtest = app.add_subcommand("randtest", "Run the four statistical tests; one JSON line per test");
    randtest->add_option("--input", rt_input, "Bits to test")->required();
    randtest->add_option("--block-len", rt_block, "Block length for the block frequency test");
    randtest->add_option("--alpha", rt_alpha, "Significance level");
    randtest->add_flag("--strict", rt_strict, "Exit with code 4 if any test fails");
    randtest->add_option("--out", rt_out, "Also write the JSON lines to this file");

    uint64_t vf_samples = 10'000;
    std::optional<uint64_t> vf_seed;
    double vf_tol = 1e-9;
    uint64_t vf_grid = 64;
    unsigned vf_workers = 1;
    bool vf_no_c = false, vf_no_guess = false;
    std::optional<std::string> vf_out, vf_out_dir;
    auto *verify = app.add_subcommand("verify", "Randomized soundness check of the analytic bounds");
    verify->add_option("--samples", vf_samples, "Number of random instances");
    verify->add_option("--seed", vf_seed, "Sweep seed");
    verify->add_option("--tolerance", vf_tol, "Allowed slack before a margin counts as a violation");
    verify->add_option("--grid-n", vf_grid, "Adversary lattice resolution (grid_n^2 directions)");
    verify->add_option("--workers", vf_workers, "Worker threads");
    verify->add_flag("--skip-c-bound", vf_no_c, "Skip the C lower-bound check");
    verify->add_flag("--skip-guessing", vf_no_guess, "Skip the guessing-probability check");
    verify->add_option("--out", vf_out, "Output verdicts path");
    verify->add_option("--out-dir", vf_out_dir, "Directory for output artifacts");

    Overrides tb_o;
    unsigned tb_workers = 0;
    std::optional<std::string> tb_out;
    auto *table = app.add_subcommand("table", "Sweep mu x misalignment and compare with the reference experiment");
    tb_o.add_to(table, true);
    table->add_option("--workers", tb_workers, "Worker threads (0 = hardware concurrency)");
    table->add_option("--out", tb_out, "Output table path");

    std::vector<std::string> argv_store;
    argv_store.emplace_back("sdiqrng");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &s : argv_store) {
        argv.push_back(s.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "sdiqrng: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (sim->parsed()) {
            RunConfig c = sim_o.resolve(RunConfig{});
            json doc = cmd_simulate(c, sim_workers, pick(sim_stats, c, "stats.json"), pick(sim_raw, c, "raw.bits"));
            out << json{{"stats", pick(sim_stats, c, "stats.json").string()},
                        {"raw_bits", doc["raw_bits"]},
                        {"config_hash", doc["config_hash"]}}
                       .dump()
                << "\n";
            return kExitOk;
        }
        if (bound->parsed()) {
            json stats_doc = read_json(bound_stats);
            RunConfig base;
            if (stats_doc.contains("config")) {
                base = config_from_json(stats_doc["config"]);
            }
            RunConfig c = bound_o.resolve(base);
            json report = cmd_bound(stats_doc, c);
            fs::path path = pick(bound_report, c, "report.json");
            write_text(path, report.dump(2) + "\n");
            out << json{{"report", path.string()},
                        {"c_bound", report["c_bound"]},
                        {"length_bits", report["length_bits"]},
                        {"rate_bps", report["rate_bps"]},
                        {"abort", report["abort"]}}
                       .dump()
                << "\n";
            return report["aborted"].get<bool>() ? kExitAbort : kExitOk;
        }
        if (extract_cmd->parsed()) {
            fs::path dir = ex_out_dir ? fs::path(*ex_out_dir) : fs::path(".");
            json report = read_json(ex_report);
            BitBuffer raw = read_bits_file(ex_raw);
            BlockPlan plan = plan_extraction(report, raw.size(), ex_block);
            BitBuffer seed;
            if (ex_gen_seed) {
                seed = generate_seed(env_or_flag_seed(ex_seed_value), plan.seed_length);
                write_bits_at(*ex_gen_seed, seed);
            } else if (ex_seed_file) {
                seed = read_bits_file(*ex_seed_file);
            } else {
                throw Error(ErrorKind::Config, "extract needs --seed-file or --generate-seed");
            }
            ExtractOutcome result = cmd_extract(raw, report, seed, ex_block);
            fs::path final_path = ex_out ? fs::path(*ex_out) : dir / "final.bits";
            fs::path ledger_path = ex_ledger ? fs::path(*ex_ledger) : dir / "ledger.json";
            write_bits_at(final_path, result.final_bits);
            write_text(ledger_path, result.ledger_doc.dump(2) + "\n");
            out << json{{"final", final_path.string()},
                        {"bits", result.final_bits.size()},
                        {"net_expansion", result.ledger.net_expansion}}
                       .dump()
                << "\n";
            return kExitOk;
        }
        if (randtest->parsed()) {
            BitBuffer bits = read_bits_file(rt_input);
            std::ostringstream lines;
            bool all_passed = true;
            for (const auto &r : run_all_tests(bits, rt_block, rt_alpha)) {
                lines << report_to_json(r, bits.size()).dump() << "\n";
                all_passed = all_passed && r.passed;
            }
            out << lines.str();
            if (rt_out) {
                write_text(*rt_out, lines.str());
            }
            return (rt_strict && !all_passed) ? kExitViolation : kExitOk;
        }
        if (verify->parsed()) {
            SweepOptions opts;
            opts.check_c_bound = !vf_no_c;
            opts.check_guessing = !vf_no_guess;
            opts.grid_n = vf_grid;
            opts.workers = vf_workers;
            uint64_t seed = env_or_flag_seed(vf_seed);
            auto verdicts = soundness_sweep(vf_samples, seed, vf_tol, opts);
            fs::path path = vf_out ? fs::path(*vf_out) : (vf_out_dir ? fs::path(*vf_out_dir) : fs::path(".")) / "verdicts.csv";
            std::ostringstream csv;
            write_verdicts_csv(csv, verdicts);
            write_text(path, csv.str());
            uint64_t violations = 0, aborted = 0;
            double min_margin = INFINITY;
            for (const auto &v : verdicts) {
                violations += v.violated;
                aborted += v.aborted;
                if (!v.aborted) {
                    min_margin = std::min(min_margin, v.margin);
                }
            }
            out << json{{"verdicts", path.string()},
                        {"checks", verdicts.size()},
                        {"violations", violations},
                        {"aborted", aborted},
                        {"min_margin", std::isfinite(min_margin) ? json(min_margin) : json(nullptr)}}
                       .dump()
                << "\n";
            return violations > 0 ? kExitViolation : kExitOk;
        }
        if (table->parsed()) {
            RunConfig c = tb_o.resolve(RunConfig{});
            auto cells = run_table(c, tb_workers);
            std::ostringstream csv;
            write_table_csv(csv, cells);
            fs::path path = pick(tb_out, c, "table.csv");
            write_text(path, csv.str());
            uint64_t c_ok = 0, rate_ok = 0;
            for (const auto &cell : cells) {
                c_ok += cell.c_within_tolerance();
                rate_ok += cell.rate_within_tolerance();
            }
            out << json{{"table", path.string()},
                        {"cells", cells.size()},
                        {"c_within_tolerance", c_ok},
                        {"rate_within_tolerance", rate_ok}}
                       .dump()
                << "\n";
            return kExitOk;
        }
    } catch (const Error &e) {
        err << "sdiqrng: " << e.what() << "\n";
        return exit_code_for(e.kind());
    }
    return kExitValidation;
}

}  // namespace sdiqrng
