#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "metaglyph/errors.hpp"
#include "metaglyph/forge/config.hpp"
#include "metaglyph/forge/instances.hpp"
#include "metaglyph/forge/render.hpp"
#include "metaglyph/gateway/http.hpp"
#include "metaglyph/gateway/mock.hpp"
#include "metaglyph/gateway/runner.hpp"
#include "metaglyph/glyph/parser.hpp"
#include "metaglyph/glyph/printer.hpp"
#include "metaglyph/metrics/report.hpp"
#include "metaglyph/metrics/scoring.hpp"
#include "metaglyph/oracle/brute_force.hpp"
#include "metaglyph/oracle/eval.hpp"
#include "metaglyph/util/jsonl.hpp"

namespace fs = std::filesystem;
using namespace metaglyph;

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string part;
    for (const char c : text) {
        if (c == ',') {
            if (!part.empty()) parts.push_back(part);
            part.clear();
        } else {
            part += c;
        }
    }
    if (!part.empty()) parts.push_back(part);
    return parts;
}

std::vector<forge::TaskInstance> load_corpus(const std::string& path) {
    std::vector<forge::TaskInstance> corpus;
    for (const auto& row : util::read_jsonl(path)) {
        corpus.push_back(forge::instance_from_json(row));
    }
    return corpus;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open " + path.string() + " for writing");
    out << text;
}

struct GenerateArgs {
    std::string families = "selection,extraction,constraint_composition,"
                           "conditional_transformation";
    int n = 100;
    std::uint64_t seed = 2026;
    std::string config_path;
    std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& args) {
    const forge::ForgeConfig config = args.config_path.empty()
                                          ? forge::ForgeConfig{}
                                          : forge::parse_forge_config(args.config_path);
    std::vector<forge::TaskFamily> families;
    std::set<std::string> seen;
    for (const auto& key : split_list(args.families)) {
        if (seen.insert(key).second) families.push_back(forge::family_from_key(key));
    }
    if (families.empty()) throw ConfigError("no task families requested");

    std::vector<util::Json> corpus_rows, prompt_rows;
    for (const auto family : families) {
        for (auto& instance : forge::generate_instances(family, args.n, args.seed, config)) {
            oracle::fill_gold(instance);
            corpus_rows.push_back(forge::instance_to_json(instance));
            const auto triplet = forge::compile_triplet(instance);
            prompt_rows.push_back({{"id", instance.id},
                                   {"variant", "NL"},
                                   {"prompt", triplet.nl},
                                   {"tokens", triplet.nl_tokens}});
            prompt_rows.push_back({{"id", instance.id},
                                   {"variant", "MG"},
                                   {"prompt", triplet.mg},
                                   {"tokens", triplet.mg_tokens}});
            prompt_rows.push_back({{"id", instance.id},
                                   {"variant", "CTRL"},
                                   {"prompt", triplet.ctrl},
                                   {"tokens", triplet.ctrl_tokens}});
        }
    }
    fs::create_directories(args.out_dir);
    const auto corpus_path = fs::path(args.out_dir) / "corpus.jsonl";
    const auto prompts_path = fs::path(args.out_dir) / "prompts.jsonl";
    util::write_jsonl(corpus_path.string(), corpus_rows);
    util::write_jsonl(prompts_path.string(), prompt_rows);
    std::cout << "wrote " << corpus_path.string() << " (" << corpus_rows.size()
              << " instances)\n";
    std::cout << "wrote " << prompts_path.string() << " (" << prompt_rows.size()
              << " prompts)\n";
    return 0;
}

struct OracleArgs {
    std::string corpus_path;
    std::string out_path;
    bool check = false;
};

int cmd_oracle(const OracleArgs& args) {
    const auto corpus = load_corpus(args.corpus_path);
    std::vector<util::Json> rows;
    int mismatches = 0, skipped = 0;
    for (const auto& instance : corpus) {
        const util::Json gold = oracle::eval_task(instance);
        rows.push_back({{"id", instance.id}, {"gold", gold}});
        if (!args.check) continue;
        if (!instance.gold.is_null() && instance.gold != gold) {
            std::cerr << instance.id << ": corpus gold disagrees with oracle\n";
            mismatches++;
            continue;
        }
        try {
            const util::Json brute = oracle::brute_force(instance);
            if (brute != gold) {
                std::cerr << instance.id << ": brute force disagrees with oracle\n";
                std::cerr << "  oracle: " << util::to_line(gold) << "\n";
                std::cerr << "  brute:  " << util::to_line(brute) << "\n";
                mismatches++;
            }
        } catch (const SizeLimit&) {
            skipped++;
        }
    }
    if (!args.out_path.empty()) {
        util::write_jsonl(args.out_path, rows);
        std::cout << "wrote " << args.out_path << " (" << rows.size() << " records)\n";
    }
    if (args.check) {
        std::cout << "oracle check: " << corpus.size() << " instances, " << mismatches
                  << " mismatches, " << skipped << " skipped (size limit)\n";
    }
    return mismatches ? 1 : 0;
}

struct RunArgs {
    std::string corpus_path;
    std::string models;
    std::string endpoint;
    int parallel = 4;
    std::string out_path;
    std::string mock;
    std::string key_env = "METAGLYPH_API_KEY";
    int timeout_ms = 30000;
};

int cmd_run(const RunArgs& args) {
    const auto corpus = load_corpus(args.corpus_path);
    const auto models = split_list(args.models);
    if (models.empty()) throw ConfigError("no model routes given");
    const auto jobs = gateway::build_jobs(corpus, models);

    gateway::RunConfig config;
    if (!args.endpoint.empty()) config.endpoint_base_url = args.endpoint;
    config.max_parallel = args.parallel;
    config.api_key_env = args.key_env;
    config.timeout = std::chrono::milliseconds(args.timeout_ms);

    gateway::RunStats stats;
    if (!args.mock.empty()) {
        std::map<std::string, std::string> gold;
        for (const auto& instance : corpus) {
            if (instance.gold.is_null()) {
                throw ConfigError("corpus instance " + instance.id +
                                  " carries no gold; mock runs need generated gold");
            }
            gold[instance.id] = util::to_line(instance.gold);
        }
        gateway::MockModel backend(gateway::mock_mode_from_key(args.mock), gold);
        stats = gateway::run_suite(jobs, backend, config, args.out_path);
    } else {
        gateway::HttpBackend backend(config);
        stats = gateway::run_suite(jobs, backend, config, args.out_path);
    }
    std::cout << "run complete: " << stats.appended << " appended, " << stats.skipped
              << " already present, " << stats.failures << " failed requests\n";
    return 0;
}

struct ScoreArgs {
    std::string trials_path;
    std::string corpus_path;
    std::string gold_path;
    std::string mode = "strict";
    std::string denominator = "all";
    std::string out_path = "report.json";
};

int cmd_score(const ScoreArgs& args) {
    metrics::ScoreInput input;
    input.trials = gateway::read_trials(args.trials_path);
    input.corpus = load_corpus(args.corpus_path);
    if (!args.gold_path.empty()) {
        for (const auto& row : util::read_jsonl(args.gold_path)) {
            input.gold[row.at("id").get<std::string>()] = row.at("gold");
        }
    }
    input.mode = metrics::parse_mode_from_key(args.mode);
    input.denominator = args.denominator == "parsed" ? "parsed_only" : "all_trials";

    const auto report = metrics::aggregate_report(input);
    write_text(args.out_path, metrics::report_to_json(report).dump(2) + "\n");
    std::cout << "wrote " << args.out_path << "\n";
    if (report.footnotes.empty()) {
        std::cout << "all cells complete\n";
    } else {
        std::cout << report.footnotes.size() << " incomplete cells (see report notes)\n";
    }
    return 0;
}

struct ReportArgs {
    std::string scores_path = "report.json";
    std::string format = "markdown";
    std::string out_dir = ".";
};

int cmd_report(const ReportArgs& args) {
    std::ifstream in(args.scores_path, std::ios::binary);
    if (!in) throw DomainError("cannot open " + args.scores_path);
    const auto report = metrics::report_from_json(util::Json::parse(in));

    fs::create_directories(args.out_dir);
    if (args.format == "markdown") {
        const auto path = fs::path(args.out_dir) / "report.md";
        write_text(path, metrics::emit_markdown(report));
        std::cout << "wrote " << path.string() << "\n";
    } else {
        for (const auto& [name, contents] : metrics::emit_csv(report)) {
            const auto path = fs::path(args.out_dir) / name;
            write_text(path, contents);
            std::cout << "wrote " << path.string() << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MetaGlyph symbolic instruction toolkit"};
    app.require_subcommand(1);

    std::string parse_text;
    auto* parse_cmd = app.add_subcommand("parse", "Parse an instruction and print its tree");
    parse_cmd->add_option("text", parse_text, "Instruction text")->required();

    GenerateArgs gen;
    auto* gen_cmd = app.add_subcommand("generate", "Generate a task corpus and its prompts");
    gen_cmd->add_option("--families", gen.families, "Comma list of task families");
    gen_cmd->add_option("--n", gen.n, "Instances per family")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Corpus seed");
    gen_cmd->add_option("--config", gen.config_path, "Generation config file");
    gen_cmd->add_option("--out", gen.out_dir, "Output directory");

    OracleArgs ora;
    auto* ora_cmd = app.add_subcommand("oracle", "Evaluate gold outputs for a corpus");
    ora_cmd->add_option("--corpus", ora.corpus_path, "corpus.jsonl path")->required();
    ora_cmd->add_option("--out", ora.out_path, "gold.jsonl path");
    ora_cmd->add_flag("--check", ora.check, "Run the brute-force agreement suite");

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "Run the evaluation suite against models");
    run_cmd->add_option("--corpus", run.corpus_path, "corpus.jsonl path")->required();
    run_cmd->add_option("--models", run.models, "Comma list of model route ids")->required();
    run_cmd->add_option("--endpoint", run.endpoint, "Chat-completions base URL");
    run_cmd->add_option("--parallel", run.parallel, "Max in-flight requests")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run.out_path, "trials.jsonl path")->required();
    run_cmd->add_option("--mock", run.mock,
                        "Mock mode: echo_oracle, garbage, fenced, prose_refusal, "
                        "ctrl_garbage");
    run_cmd->add_option("--key-env", run.key_env, "Environment variable holding the API key");
    run_cmd->add_option("--timeout", run.timeout_ms, "Request timeout in milliseconds")
        ->check(CLI::PositiveNumber);

    ScoreArgs score;
    auto* score_cmd = app.add_subcommand("score", "Score a trials file into report.json");
    score_cmd->add_option("--trials", score.trials_path, "trials.jsonl path")->required();
    score_cmd->add_option("--corpus", score.corpus_path, "corpus.jsonl path")->required();
    score_cmd->add_option("--gold", score.gold_path, "gold.jsonl override");
    score_cmd->add_option("--mode", score.mode, "Parse mode")
        ->check(CLI::IsMember({"strict", "lenient"}));
    score_cmd->add_option("--denominator", score.denominator, "Fidelity denominator")
        ->check(CLI::IsMember({"all", "parsed"}));
    score_cmd->add_option("--out", score.out_path, "report.json path");

    ReportArgs rep;
    auto* rep_cmd = app.add_subcommand("report", "Render report.json to markdown or CSV");
    rep_cmd->add_option("--scores", rep.scores_path, "report.json path");
    rep_cmd->add_option("--format", rep.format, "Output format")
        ->check(CLI::IsMember({"markdown", "csv"}));
    rep_cmd->add_option("--out", rep.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse_cmd->parsed()) {
            const auto instruction = glyph::parse_instruction(parse_text);
            std::cout << glyph::dump_tree(instruction);
            std::cout << "canonical: " << glyph::print_instruction(instruction) << "\n";
            return 0;
        }
        if (gen_cmd->parsed()) return cmd_generate(gen);
        if (ora_cmd->parsed()) return cmd_oracle(ora);
        if (run_cmd->parsed()) return cmd_run(run);
        if (score_cmd->parsed()) return cmd_score(score);
        if (rep_cmd->parsed()) return cmd_report(rep);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 0;
}
