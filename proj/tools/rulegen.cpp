// rulegen: generate propagation rules from constraint tables, propagate and
// solve problems with them, emit CHR, and run the property checks.
//
// Exit codes: 0 ok, 1 inconsistent / no solution / failed check, 2 usage or
// parse error.

#include <rulegen/rulegen.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace rulegen;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;

struct RelationSource {
    std::string file;
    std::string relation;
    std::string builtin;
};

void add_relation_source(CLI::App * cmd, RelationSource & src)
{
    cmd->add_option("file", src.file, "Relation file");
    cmd->add_option("--relation", src.relation, "Relation to take from the file");
    cmd->add_option("--builtin", src.builtin, "Built-in relation instead of a file");
}

void print_warnings(const std::vector<std::string> & warnings)
{
    for (const auto & w : warnings)
        std::cerr << "warning: " << w << "\n";
}

auto load_source(const RelationSource & src) -> Relation
{
    if (! src.builtin.empty()) {
        if (! src.file.empty() || ! src.relation.empty())
            throw UsageError("--builtin cannot be combined with a relation file");
        return builtin(src.builtin);
    }
    if (src.file.empty())
        throw UsageError("a relation file or --builtin NAME is required");
    std::vector<std::string> warnings;
    auto all = load_relations(src.file, &warnings);
    print_warnings(warnings);
    if (! src.relation.empty()) {
        for (auto & r : all)
            if (r.name() == src.relation)
                return std::move(r);
        throw UsageError("no relation named '" + src.relation + "' in " + src.file);
    }
    if (all.size() != 1)
        throw UsageError(src.file + " holds " + std::to_string(all.size()) + " relations; choose one with --relation");
    return std::move(all.front());
}

/// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string & path)
    {
        if (! path.empty()) {
            file_.open(path);
            if (! file_)
                throw UsageError("cannot write " + path);
        }
    }

    auto stream() -> std::ostream & { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct GenOptions {
    std::string kind;
    RelationSource source;
    std::optional<std::size_t> max_premise;
    std::string emit = "native";
    std::optional<bool> merge;
    bool stats = false;
    std::string out;
};

auto run_gen(const GenOptions & o) -> int
{
    auto rel = load_source(o.source);
    const bool chr = o.emit == "chr";
    const bool merge = o.merge.value_or(chr);
    auto style = o.source.builtin.empty() ? ChrStyle{ } : builtin_chr_style();
    const auto start = std::chrono::steady_clock::now();

    std::string text;
    std::size_t raw = 0, merged = 0;
    auto header = [&] (const char * what) {
        return "% " + rel.name() + "/" + std::to_string(rel.arity()) + " " + what + ": " + std::to_string(merged)
            + " merged, " + std::to_string(raw) + " before merging\n";
    };

    if (o.kind == "rules") {
        auto rules = generate_rules(rel, o.max_premise);
        auto groups = merge ? merge_by_premise(rules) : singleton_groups(rules);
        raw = rules.size();
        merged = merge_by_premise(rules).size();
        if (chr)
            text = header("membership rules") + emit_chr_membership(rel, groups, style);
        else
            for (const auto & g : groups)
                text += render_group(rel, g) + "\n";
    }
    else {
        auto rules = generate_inclusion_rules(rel, o.max_premise);
        auto groups = merge ? merge_by_premise(rules) : singleton_groups(rules);
        raw = rules.size();
        merged = merge_by_premise(rules).size();
        if (chr)
            text = header("inclusion rules") + emit_chr_inclusion(rel, groups, style);
        else
            for (const auto & g : groups)
                text += render_group(rel, g) + "\n";
    }

    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Output out(o.out);
    out.stream() << text;
    if (o.stats)
        std::cerr << "relation=" << rel.name() << " kind=" << o.kind << " raw=" << raw << " merged=" << merged
                  << " seconds=" << elapsed << "\n";
    return exit_ok;
}

struct ProblemOptions {
    std::string file;
    std::string mode = "membership";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_premise;
    bool trace = false;
    bool all = false;
    std::optional<std::size_t> limit;
    bool stats = false;
    std::string out;
};

auto load_problem_file(const std::string & path) -> Problem
{
    std::vector<std::string> warnings;
    auto problem = load_problem(path, &warnings);
    print_warnings(warnings);
    return problem;
}

auto run_propagate(const ProblemOptions & o) -> int
{
    auto problem = load_problem_file(o.file);
    auto props = PropagatorSet::build(problem, parse_mode(o.mode), o.max_premise);
    Output out(o.out);
    FixpointOptions options;
    options.shuffle_seed = o.seed;
    options.trace = o.trace ? &out.stream() : nullptr;
    FixpointStats stats;
    auto store = fixpoint(problem, props, DomainStore(problem), options, &stats);
    if (o.stats)
        std::cerr << "revisions=" << stats.revisions << " prunings=" << stats.prunings << "\n";
    if (store.inconsistent()) {
        out.stream() << "INCONSISTENT\n";
        return exit_failed;
    }
    for (std::size_t v = 0; v < problem.num_variables(); ++v)
        out.stream() << problem.variable(v).name << " in " << store.render(problem, v) << "\n";
    return exit_ok;
}

auto run_solve(const ProblemOptions & o) -> int
{
    auto problem = load_problem_file(o.file);
    auto props = PropagatorSet::build(problem, parse_mode(o.mode), o.max_premise);
    Output out(o.out);
    FixpointOptions options;
    options.shuffle_seed = o.seed;
    options.trace = o.trace ? &out.stream() : nullptr;
    auto result = solve_all(problem, props, o.all ? std::nullopt : o.limit, options);
    for (const auto & s : result.solutions)
        out.stream() << render_solution(problem, s) << "\n";
    out.stream() << "solutions=" << result.solutions.size() << " nodes=" << result.stats.nodes
                 << " failures=" << result.stats.failures << "\n";
    if (o.stats)
        std::cerr << "prunings=" << result.stats.prunings << "\n";
    return result.solutions.empty() ? exit_failed : exit_ok;
}

struct VerifyOptions {
    RelationSource source;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string out;
};

auto run_verify(const VerifyOptions & o) -> int
{
    auto rel = load_source(o.source);
    auto report = run_verification(rel, o.trials, o.seed);
    Output out(o.out);
    for (const auto & p : report.properties)
        out.stream() << (p.skipped ? "SKIP " : p.passed ? "PASS " : "FAIL ") << p.name << " (" << p.detail << ")\n";
    for (const auto & note : report.notes)
        out.stream() << "NOTE " << note << "\n";
    return report.passed() ? exit_ok : exit_failed;
}

}

int main(int argc, char ** argv)
{
    CLI::App app{ "Propagation-rule generator and finite-domain solver for constraint tables" };
    app.require_subcommand(1);

    GenOptions gen;
    auto * gen_cmd = app.add_subcommand("gen", "Generate minimal membership or inclusion rules");
    gen_cmd->add_option("kind", gen.kind, "rules or inclusion")->required()->check(CLI::IsMember({ "rules", "inclusion" }));
    add_relation_source(gen_cmd, gen.source);
    gen_cmd->add_option("--max-premise", gen.max_premise, "Largest premise size (default arity-1)");
    gen_cmd->add_option("--emit", gen.emit, "native or chr")->check(CLI::IsMember({ "native", "chr" }));
    gen_cmd->add_flag("--merge,!--no-merge", gen.merge, "Group rules sharing a premise (default on for chr)");
    gen_cmd->add_flag("--stats", gen.stats, "Print rule counts and time to stderr");
    gen_cmd->add_option("--out", gen.out, "Output file");

    ProblemOptions prop;
    auto * prop_cmd = app.add_subcommand("propagate", "Reduce domains of a problem to the propagation fixpoint");
    ProblemOptions solve;
    auto * solve_cmd = app.add_subcommand("solve", "Enumerate solutions by labeling with propagation");
    for (auto [cmd, o] : { std::pair{ prop_cmd, &prop }, std::pair{ solve_cmd, &solve } }) {
        cmd->add_option("problem", o->file, "Problem file")->required();
        cmd->add_option("--mode", o->mode, "membership (alias rules), inclusion or gac");
        cmd->add_option("--seed", o->seed, "Serve the worklist in a seeded random order");
        cmd->add_option("--max-premise", o->max_premise, "Largest premise size of generated rules");
        cmd->add_flag("--trace", o->trace, "Print one line per pruning");
        cmd->add_flag("--stats", o->stats, "Print propagation counters to stderr");
        cmd->add_option("--out", o->out, "Output file");
    }
    auto * all_flag = solve_cmd->add_flag("--all", solve.all, "All solutions (default)");
    solve_cmd->add_option("--limit", solve.limit, "Stop after N solutions")->excludes(all_flag);

    VerifyOptions verify;
    auto * verify_cmd = app.add_subcommand("verify", "Check generators and consistency theorems on one relation");
    add_relation_source(verify_cmd, verify.source);
    verify_cmd->add_option("--trials", verify.trials, "Random domain restrictions per property");
    verify_cmd->add_option("--seed", verify.seed, "Random seed");
    verify_cmd->add_option("--out", verify.out, "Output file");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp & e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError & e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (gen_cmd->parsed())
            return run_gen(gen);
        if (prop_cmd->parsed())
            return run_propagate(prop);
        if (solve_cmd->parsed())
            return run_solve(solve);
        return run_verify(verify);
    }
    catch (const UsageError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const ParseError & e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
