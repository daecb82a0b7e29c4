#include "drip/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drip/oracle.hpp"
#include "drip/repair.hpp"
#include "drip/stats.hpp"

namespace drip::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct RunConfig {
    std::string app_path;
    std::string resource_path;
    int depth = 3;
    std::string release = "early";
    bool no_validate = false;
    std::string format = "json";
    std::string out_path;
};

void add_input(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("app", cfg.app_path, "Application IR document")->required();
    cmd.add_option("--resource", cfg.resource_path, "Resource specification")->required();
}

void add_depth(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--depth", cfg.depth, "Callback unrolling depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd.add_option("--release", cfg.release, "Release policy")
        ->check(CLI::IsMember({"early", "late"}))
        ->capture_default_str();
}

void add_output(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();
    cmd.add_option("--out", cfg.out_path, "Write the document here instead of standard output");
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path + "'");
    file << text;
    if (!file) throw Error("cannot write '" + path + "'");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_file(path, text);
    }
}

ReleasePolicy policy_of(const RunConfig& cfg) {
    return cfg.release == "late" ? ReleasePolicy::Late : ReleasePolicy::Early;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
    const auto app = load_app(cfg.app_path);
    const auto spec = load_resource_spec(cfg.resource_path);
    const AnalysisOptions options{policy_of(cfg)};
    const auto result = analyze_app(app, spec, cfg.depth, options);
    emit(cfg.format == "json" ? reports_to_json(result, spec, cfg.depth, options)
                              : reports_to_text(result),
         cfg.out_path, out);
    return result.reports.empty() ? kOk : kFindings;
}

std::string fix_text(const AppModel& before, const RepairResult& result) {
    std::string text = patch_diff(before, result.patched);
    for (const auto& applied : result.fixes) {
        const auto& f = applied.fix;
        text += "fix " + f.component + " " + f.location.to_string() + ": " + f.release_op + "(" +
                f.target_ref + ") if held";
        if (f.introduces_field) text += ", binds " + *f.introduces_field;
        if (applied.validation) text += ", " + std::string(to_string(applied.validation->verdict));
        text += "\n";
    }
    for (const auto& e : result.errors) text += "error " + e + "\n";
    text += std::to_string(result.fixes.size()) + (result.fixes.size() == 1 ? " fix" : " fixes") + "\n";
    return text;
}

int cmd_fix(const RunConfig& cfg, const std::string& patched_path, std::ostream& out) {
    const auto app = load_app(cfg.app_path);
    const auto spec = load_resource_spec(cfg.resource_path);
    const auto result = repair(app, spec, cfg.depth, {policy_of(cfg), !cfg.no_validate});
    emit(cfg.format == "json" ? patch_bundle_json(result, spec) : fix_text(app, result),
         cfg.out_path, out);
    if (!patched_path.empty()) write_file(patched_path, serialize_app(result.patched));
    return result.any_invalid() ? kInvalidFix : kOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const auto app = load_app(cfg.app_path);
    const auto spec = load_resource_spec(cfg.resource_path);
    const auto result = validate(app, spec, cfg.depth, {policy_of(cfg)});
    emit(cfg.format == "json" ? validation_to_json(result, spec) : validation_to_text(result),
         cfg.out_path, out);
    return result.verdict == Verdict::Valid ? kOk : kInvalidFix;
}

int cmd_stats(const RunConfig& cfg, const std::string& dot_dir, std::ostream& out) {
    const auto app = load_app(cfg.app_path);
    const auto spec = load_resource_spec(cfg.resource_path);
    const auto stats = app_stats(app, spec);
    emit(cfg.format == "json" ? stats_to_json(stats, spec) : stats_to_text(stats), cfg.out_path, out);
    if (!dot_dir.empty()) {
        fs::create_directories(dot_dir);
        for (const auto& [name, p] : app.procedures()) {
            write_file((fs::path(dot_dir) / (name + ".dot")).string(),
                       to_dot(build_rfg(p, spec, false), name));
        }
    }
    return kOk;
}

struct CorpusConfig {
    std::uint64_t seed = 0;
    int count = 1;
    std::string resource_path;
    std::string out_dir;
    GeneratorOptions generator;
};

int cmd_corpus_generate(const CorpusConfig& cfg, std::ostream& out) {
    const auto spec = load_resource_spec(cfg.resource_path);
    fs::create_directories(cfg.out_dir);
    for (int i = 0; i < cfg.count; ++i) {
        const auto seed = cfg.seed + static_cast<std::uint64_t>(i);
        const auto path = (fs::path(cfg.out_dir) / ("gen_" + std::to_string(seed) + ".json")).string();
        write_file(path, serialize_app(generate_app(seed, spec, cfg.generator)));
        out << path << "\n";
    }
    return kOk;
}

int cmd_oracle_run(const RunConfig& cfg, int loop_bound, std::ostream& out) {
    const auto app = load_app(cfg.app_path);
    const auto spec = load_resource_spec(cfg.resource_path);
    OracleOptions options;
    options.depth = cfg.depth;
    options.loop_bound = loop_bound;
    options.late = cfg.release == "late";
    const auto leaks = oracle_leaks(app, spec, options);
    const auto violations = oracle_violations(app, spec, options);
    if (cfg.format == "text") {
        std::string text;
        for (const auto& l : leaks) text += "leak " + l.component + " " + l.origin.to_string() + "\n";
        for (const auto& v : violations) text += "violation " + v.component + " " + v.kind + "\n";
        emit(text, cfg.out_path, out);
    } else {
        ojson doc;
        doc["resource"] = spec.name();
        doc["depth"] = cfg.depth;
        doc["loop_bound"] = loop_bound;
        doc["release_policy"] = cfg.release;
        doc["leaks"] = ojson::array();
        for (const auto& l : leaks) {
            doc["leaks"].push_back(
                {{"component", l.component},
                 {"acquire",
                  {{"procedure", l.origin.procedure}, {"block", l.origin.block}, {"index", l.origin.index}}}});
        }
        doc["violations"] = ojson::array();
        for (const auto& v : violations) {
            doc["violations"].push_back({{"component", v.component}, {"kind", v.kind}});
        }
        emit(doc.dump(2) + "\n", cfg.out_path, out);
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Resource leak detection and repair for lifecycle-driven apps", "drip"};
    app.require_subcommand(1);

    RunConfig analyze_cfg;
    auto* analyze = app.add_subcommand("analyze", "Report leaked resources");
    add_input(*analyze, analyze_cfg);
    add_depth(*analyze, analyze_cfg);
    add_output(*analyze, analyze_cfg);

    RunConfig fix_cfg;
    std::string patched_path;
    auto* fix = app.add_subcommand("fix", "Insert guarded releases and validate them");
    add_input(*fix, fix_cfg);
    add_depth(*fix, fix_cfg);
    add_output(*fix, fix_cfg);
    fix->add_flag("--no-validate", fix_cfg.no_validate, "Skip validation of the patched app");
    fix->add_option("--patched", patched_path, "Also write the patched IR document here");

    RunConfig validate_cfg;
    auto* validate_cmd = app.add_subcommand("validate", "Check an app for misuse and residual leaks");
    add_input(*validate_cmd, validate_cfg);
    add_depth(*validate_cmd, validate_cfg);
    add_output(*validate_cmd, validate_cfg);

    RunConfig stats_cfg;
    std::string dot_dir;
    auto* stats = app.add_subcommand("stats", "Graph sizes and cyclomatic complexity");
    add_input(*stats, stats_cfg);
    add_output(*stats, stats_cfg);
    stats->add_option("--dot", dot_dir, "Write one DOT file per procedure into this directory");

    CorpusConfig corpus_cfg;
    auto* corpus = app.add_subcommand("corpus", "Random app corpus");
    corpus->require_subcommand(1);
    auto* generate = corpus->add_subcommand("generate", "Write generated IR documents");
    generate->add_option("--seed", corpus_cfg.seed, "First seed")->capture_default_str();
    generate->add_option("--count", corpus_cfg.count, "Number of apps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--resource", corpus_cfg.resource_path, "Resource specification")->required();
    generate->add_option("--out", corpus_cfg.out_dir, "Output directory")->required();
    generate->add_option("--max-procedures", corpus_cfg.generator.max_procedures)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--max-blocks", corpus_cfg.generator.max_blocks)
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    RunConfig oracle_cfg;
    int loop_bound = OracleOptions{}.loop_bound;
    auto* oracle = app.add_subcommand("oracle", "Brute-force reference verdicts");
    oracle->require_subcommand(1);
    auto* oracle_run = oracle->add_subcommand("run", "Enumerate bounded executions of one app");
    add_input(*oracle_run, oracle_cfg);
    add_depth(*oracle_run, oracle_cfg);
    add_output(*oracle_run, oracle_cfg);
    oracle_run->add_option("--loop-bound", loop_bound, "Block visits per activation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kInputError;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_cfg, out);
        if (*fix) return cmd_fix(fix_cfg, patched_path, out);
        if (*validate_cmd) return cmd_validate(validate_cfg, out);
        if (*stats) return cmd_stats(stats_cfg, dot_dir, out);
        if (*generate) return cmd_corpus_generate(corpus_cfg, out);
        if (*oracle_run) return cmd_oracle_run(oracle_cfg, loop_bound, out);
    } catch (const BudgetExceeded& e) {
        err << "drip: " << e.what() << "\n";
        return kBudget;
    } catch (const std::exception& e) {
        err << "drip: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

} // namespace drip::cli
