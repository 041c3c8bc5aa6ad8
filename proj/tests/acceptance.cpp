// Acceptance run: one [PASS]/[FAIL] line per criterion with its runtime
// against a fixed ceiling. Exits 1 when any criterion fails.

#include "properties.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace testing;

namespace {

struct Verdict {
    bool passed = true;
    std::string detail;
};

void expect(Verdict & o, bool condition, const std::string & what)
{
    if (! condition && o.passed) {
        o.passed = false;
        o.detail = what;
    }
}

auto cli_stdout(const std::string & args) -> std::string
{
    auto command = "cd '" + source_dir().string() + "' && '" RULEGEN_CLI "' " + args + " 2>/dev/null";
    std::string out;
    if (auto * pipe = ::popen(command.c_str(), "r")) {
        std::array<char, 4096> buffer;
        while (auto n = std::fread(buffer.data(), 1, buffer.size(), pipe))
            out.append(buffer.data(), n);
        ::pclose(pipe);
    }
    return out;
}

/// Non-comment lines of CHR output.
auto rule_lines(const std::string & text) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        if (! line.empty() && line[0] != '%')
            out.push_back(line);
    return out;
}

auto as_set(const std::vector<std::string> & v) -> std::set<std::string> { return { v.begin(), v.end() }; }

auto contains(const std::vector<std::string> & v, const std::string & line) -> bool
{
    return std::find(v.begin(), v.end(), line) != v.end();
}

auto merged_count(const Relation & r) -> std::size_t { return merge_by_premise(generate_rules(r)).size(); }
auto merged_inclusion_count(const Relation & r) -> std::size_t
{
    return merge_by_premise(generate_inclusion_rules(r)).size();
}

auto criterion_and() -> Verdict
{
    Verdict o;
    const std::set<std::string> printed{
        "and(1,1,X) ==> X##0.", "and(X,0,Y) ==> Y##1.", "and(0,X,Y) ==> Y##1.",
        "and(X,Y,1) ==> X##0,Y##0.", "and(1,X,0) ==> X##1.", "and(X,1,0) ==> X##1." };
    auto rules = rule_lines(cli_stdout("gen rules --builtin and --emit chr --merge"));
    auto inclusion = rule_lines(cli_stdout("gen inclusion --builtin and --emit chr --merge"));
    expect(o, rules.size() == 6 && as_set(rules) == printed, "membership lines differ from the six printed rules");
    expect(o, inclusion.size() == 6 && as_set(inclusion) == printed, "inclusion lines differ from the six printed rules");
    o.detail = o.passed ? "6 lines, both generators" : o.detail;
    return o;
}

auto criterion_t() -> Verdict
{
    Verdict o;
    const std::string printed = "t(X,Y,Z) ==> X##'l',X##'-',X##'+',Y##'r',Y##'-',Y##'+'.";
    auto rules = rule_lines(cli_stdout("gen rules --builtin t --emit chr --merge"));
    auto inclusion = rule_lines(cli_stdout("gen inclusion --builtin t --emit chr --merge"));
    expect(o, rules == std::vector<std::string>{ printed }, "membership output is not the single printed rule");
    expect(o, inclusion == std::vector<std::string>{ printed }, "inclusion output is not the single printed rule");
    o.detail = o.passed ? "1 line, both generators" : o.detail;
    return o;
}

auto criterion_kleene() -> Verdict
{
    Verdict o;
    auto k = builtin("kleene-equiv");
    auto raw = generate_rules(k).size();
    auto raw_inclusion = generate_inclusion_rules(k).size();
    auto merged = merged_count(k);
    auto merged_inclusion = merged_inclusion_count(k);
    auto rules = rule_lines(cli_stdout("gen rules --builtin kleene-equiv --emit chr"));
    auto inclusion = rule_lines(cli_stdout("gen inclusion --builtin kleene-equiv --emit chr"));
    expect(o, merged == 20, "merged rule count " + std::to_string(merged) + ", raw " + std::to_string(raw));
    expect(o, merged_inclusion == 26,
            "merged inclusion count " + std::to_string(merged_inclusion) + ", raw " + std::to_string(raw_inclusion));
    expect(o, rules.size() == 20 && contains(rules, "equiv(X,Y,f) ==> X##u,Y##u."), "printed rule missing");
    expect(o, inclusion.size() == 26 && contains(inclusion, "equiv(t,X,Y) ==> in(Y,[f, u]) | X##t."),
            "printed inclusion rule missing");
    if (o.passed)
        o.detail = "merged 20/26 (raw " + std::to_string(raw) + "/" + std::to_string(raw_inclusion) + "), both printed lines";
    return o;
}

auto criterion_fork() -> Verdict
{
    Verdict o;
    auto f = builtin("fork");
    auto merged = merged_count(f);
    auto merged_inclusion = merged_inclusion_count(f);
    expect(o, merged == 12, "merged rule count " + std::to_string(merged));
    expect(o, merged_inclusion == 24, "merged inclusion count " + std::to_string(merged_inclusion));
    if (o.passed)
        o.detail = "merged 12/24 (raw " + std::to_string(generate_rules(f).size()) + "/"
            + std::to_string(generate_inclusion_rules(f).size()) + ")";
    return o;
}

auto criterion_full_adder() -> Verdict
{
    Verdict o;
    auto fa = builtin("full-adder");
    expect(o, fa.size() == 8, "table has " + std::to_string(fa.size()) + " tuples");
    expect(o, has_tuple(fa, { "1", "0", "1", "1", "0" }), "tuple (1,0,1,1,0) missing");
    auto merged = merged_count(fa);
    expect(o, merged == 52, "merged rule count " + std::to_string(merged));

    auto q = load_problem(source_dir() / "samples" / "full_adder_query.csp");
    auto s = fixpoint(q, PropagatorSet::build(q, Mode::membership));
    expect(o, ! s.inconsistent() && s.render(q, *q.variable_index("Z")) == "{1}", "full_adder query does not fix Z");

    auto g = load_problem(source_dir() / "samples" / "add_query.csp");
    auto t = fixpoint(g, PropagatorSet::build(g, Mode::membership));
    expect(o, ! t.inconsistent() && t.render(g, *g.variable_index("O1")) == "{0,1}", "gate network reduces the carry");
    if (o.passed)
        o.detail = "8 tuples, 52 merged rules (raw " + std::to_string(generate_rules(fa).size())
            + "), Z={1} vs {0,1}";
    return o;
}

auto criterion_impossible_object() -> Verdict
{
    Verdict o;
    auto p = load_problem(source_dir() / "samples" / "impossible_object.csp");
    const std::vector<std::pair<const char *, const char *>> listed{
        { "AF", "{+,-,l}" }, { "AI", "{+,-}" }, { "AB", "{+,-,r}" }, { "IJ", "{+,-,l,r}" }, { "IH", "{+,-,l,r}" },
        { "JH", "{+,-,l,r}" }, { "GH", "{+,-,l,r}" }, { "GC", "{+,-,l,r}" }, { "GE", "{+,-,l,r}" },
        { "EF", "{+,-}" }, { "ED", "{+,-,l}" }, { "CD", "{+,-,r}" }, { "CB", "{+,-,l}" } };
    auto s = fixpoint(p, PropagatorSet::build(p, Mode::membership));
    expect(o, ! s.inconsistent(), "membership rules already fail");
    if (! s.inconsistent())
        for (const auto & [name, dom] : listed) {
            auto got = s.render(p, *p.variable_index(name));
            expect(o, got == dom, std::string(name) + " is " + got + ", listed " + dom);
        }
    expect(o, fixpoint(p, PropagatorSet::build(p, Mode::inclusion)).inconsistent(), "inclusion rules do not fail");
    auto search = solve_all(p, Mode::membership);
    expect(o, search.solutions.empty(), "labeling finds solutions");
    if (o.passed)
        o.detail = "13 domains match, inclusion INCONSISTENT, 0 solutions in " + std::to_string(search.stats.nodes)
            + " nodes";
    return o;
}

/// Allen relation of interval a to interval b.
auto allen(int a1, int a2, int b1, int b2) -> std::string
{
    if (a2 < b1)
        return "b";
    if (a2 == b1)
        return "m";
    if (a1 == b1 && a2 == b2)
        return "e";
    if (a1 == b1 && a2 < b2)
        return "s";
    if (a1 > b1 && a2 == b2)
        return "f";
    if (a1 > b1 && a2 < b2)
        return "d";
    if (a1 < b1 && b1 < a2 && a2 < b2)
        return "o";
    return allen(b1, b2, a1, a2) + "-";
}

/// Composition triples from every configuration of three intervals with
/// endpoints in 0..5, which realizes every ordering of six endpoints.
auto derive_allen_table() -> std::set<std::vector<Value>>
{
    std::vector<std::pair<int, int>> intervals;
    for (int lo = 0; lo <= 5; ++lo)
        for (int hi = lo + 1; hi <= 5; ++hi)
            intervals.emplace_back(lo, hi);
    std::set<std::vector<Value>> triples;
    for (auto [a1, a2] : intervals)
        for (auto [b1, b2] : intervals)
            for (auto [c1, c2] : intervals)
                triples.insert({ allen(a1, a2, b1, b2), allen(b1, b2, c1, c2), allen(a1, a2, c1, c2) });
    return triples;
}

auto solution_set(const std::vector<Solution> & s) -> std::set<std::string>
{
    std::set<std::string> out;
    for (const auto & x : s) {
        std::string t = "(";
        for (std::size_t v = 0; v < x.values.size(); ++v)
            t += (v ? "," : "") + x.values[v];
        out.insert(t + ")");
    }
    return out;
}

auto criterion_allen() -> Verdict
{
    Verdict o;
    auto tr = load_relations(source_dir() / "external-data" / "allen.rel").at(0);
    std::set<std::vector<Value>> file;
    for (std::size_t i = 0; i < tr.size(); ++i)
        file.insert(tr.tuple(i));
    auto derived = derive_allen_table();
    expect(o, file == derived, "table differs from the derived composition (" + std::to_string(file.size()) + " vs "
            + std::to_string(derived.size()) + " triples)");

    auto rules = generate_rules(tr);
    auto merged = merge_by_premise(rules).size();
    expect(o, merged == 498, "merged rule count " + std::to_string(merged) + ", raw " + std::to_string(rules.size()));

    const std::set<std::string> q1_listed{
        "(m-,b,b)", "(m-,b,d-)", "(m-,b,f-)", "(m-,b,m)", "(m-,b,o)", "(m-,b-,b-)", "(m-,m,e)", "(m-,m,s)",
        "(m-,m,s-)", "(m-,m-,b-)", "(o-,b,b)", "(o-,b,d-)", "(o-,b,f-)", "(o-,b,m)", "(o-,b,o)", "(o-,b-,b-)",
        "(o-,m,d-)", "(o-,m,f-)", "(o-,m,o)", "(o-,m-,b-)" };
    const std::set<std::string> q2_listed{ "(m-,b,o)", "(m-,m,s)", "(o-,b,o)", "(o-,m,o)" };
    auto q1 = load_problem(source_dir() / "samples" / "allen_q1.csp");
    auto q2 = load_problem(source_dir() / "samples" / "allen_q2.csp");
    auto props1 = PropagatorSet::with_rules(q1, { rules });
    auto props2 = PropagatorSet::with_rules(q2, { rules });
    auto s1 = solution_set(solve_all(q1, props1).solutions);
    auto s2 = solution_set(solve_all(q2, props2).solutions);
    expect(o, s1 == q1_listed, "query 1 gives " + std::to_string(s1.size()) + " triples, not the 20 listed");
    expect(o, s2 == q2_listed, "query 2 gives " + std::to_string(s2.size()) + " triples, not the 4 listed");
    if (o.passed)
        o.detail = std::to_string(file.size()) + " triples re-derived, 498 merged rules (raw "
            + std::to_string(rules.size()) + "), 20 and 4 solutions";
    return o;
}

auto from_check(const CheckResult & r, std::size_t at_least) -> Verdict
{
    Verdict o{ r.passed && r.instances >= at_least, r.detail };
    if (r.passed && r.instances < at_least)
        o.detail = "only " + std::to_string(r.instances) + " instances";
    auto prefix = std::to_string(r.instances) + " instances";
    o.detail = o.detail.empty() ? prefix : prefix + "; " + o.detail;
    return o;
}

struct Criterion {
    std::string id;
    std::string title;
    double ceiling_seconds;
    std::function<Verdict()> run;
};

}

int main()
{
    const std::vector<Criterion> criteria{
        { "1", "and gate: six CHR rules from both generators", 1.0, criterion_and },
        { "2", "T junction: one rule from both generators", 1.0, criterion_t },
        { "3", "Kleene equivalence: 20 rules, 26 inclusion rules", 5.0, criterion_kleene },
        { "4", "Waltz fork: 12 rules, 24 inclusion rules", 10.0, criterion_fork },
        { "5", "full adder: 8 tuples, 52 rules, Z reduced", 30.0, criterion_full_adder },
        { "6", "impossible object: 13 reductions, inclusion failure, no solutions", 10.0, criterion_impossible_object },
        { "7", "Allen composition: 498 rules, both queries", 600.0, criterion_allen },
        { "8a", "generators equal oracles on random relations", 60.0,
            [] { return from_check(check_generators_match_oracles(81, 200), 200); } },
        { "8b", "inclusion closure equals gac", 60.0,
            [] { return from_check(check_inclusion_equals_gac(82, 200), 200); } },
        { "8c", "two-valued columns: rule closure equals gac", 60.0,
            [] { return from_check(check_binary_rules_equal_gac(83, 200), 200); } },
        { "8d", "gac implies rule consistency, base c witness", 60.0,
            [] { return from_check(check_arc_implies_rule(84, 200), 200); } },
        { "8e", "search equals brute force, node order", 60.0, [] {
            auto random = check_search_matches_brute_force(85, 100);
            auto samples = check_sample_node_order();
            if (! samples.passed)
                return Verdict{ false, samples.detail };
            auto o = from_check(random, 100);
            o.detail += "; samples " + samples.detail;
            return o;
        } },
        { "8f", "fixpoints independent of worklist order", 60.0,
            [] { return from_check(check_order_independence(86, 60, 5), 60); } },
    };
    const double suite_ceiling = 300.0;

    bool all = true;
    double suite_seconds = 0;
    for (const auto & c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict o;
        try {
            o = c.run();
        }
        catch (const std::exception & e) {
            o = { false, std::string("exception: ") + e.what() };
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.id.starts_with("8"))
            suite_seconds += seconds;
        bool in_time = seconds <= c.ceiling_seconds;
        bool passed = o.passed && in_time;
        all = all && passed;
        std::printf("[%s] %-3s %s: %s (%.3f s, ceiling %.0f s)%s\n", passed ? "PASS" : "FAIL", c.id.c_str(),
                c.title.c_str(), o.detail.c_str(), seconds, c.ceiling_seconds, in_time ? "" : " over time");
    }
    bool suite_in_time = suite_seconds <= suite_ceiling;
    all = all && suite_in_time;
    std::printf("[%s] 8   property suite total: %.3f s, ceiling %.0f s\n", suite_in_time ? "PASS" : "FAIL",
            suite_seconds, suite_ceiling);
    return all ? 0 : 1;
}
