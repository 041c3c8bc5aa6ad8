#pragma once

#include <rulegen/rulegen.hpp>

#include <algorithm>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace testing {

using namespace rulegen;

inline auto source_dir() -> std::filesystem::path { return RULEGEN_SOURCE_DIR; }

inline auto shared(Relation r) -> std::shared_ptr<const Relation>
{
    return std::make_shared<const Relation>(std::move(r));
}

/// Relation over value tokens 0..k-1 per column with every row of the
/// product kept with probability `density`; `nonempty` forces at least one row.
template <typename Rng>
auto random_relation(Rng & rng, std::size_t arity, std::size_t max_domain, double density = 0.4, bool nonempty = true,
        std::string name = "r") -> Relation
{
    std::vector<Domain> doms;
    std::vector<std::size_t> sizes;
    for (std::size_t c = 0; c < arity; ++c) {
        auto k = std::uniform_int_distribution<std::size_t>(1, max_domain)(rng);
        std::vector<Value> values;
        for (std::size_t v = 0; v < k; ++v)
            values.push_back(std::to_string(v));
        doms.emplace_back(std::move(values));
        sizes.push_back(k);
    }
    std::bernoulli_distribution keep(density);
    std::vector<Row> rows;
    Row row(arity, 0);
    while (true) {
        if (keep(rng))
            rows.push_back(row);
        std::size_t c = arity;
        while (c-- > 0) {
            if (++row[c] < sizes[c])
                break;
            row[c] = 0;
        }
        if (c == std::size_t(-1))
            break;
    }
    if (rows.empty() && nonempty) {
        Row pick(arity);
        for (std::size_t c = 0; c < arity; ++c)
            pick[c] = static_cast<ValueId>(std::uniform_int_distribution<std::size_t>(0, sizes[c] - 1)(rng));
        rows.push_back(pick);
    }
    return Relation::from_rows(std::move(name), std::move(doms), std::move(rows));
}

/// A small network: `num_vars` variables over {0..k-1}, `num_constraints`
/// random relations over random distinct variables. Variable domains are
/// random nonempty subsets of the shared value range.
template <typename Rng>
auto random_problem(Rng & rng, std::size_t num_vars, std::size_t num_constraints, std::size_t k, double density = 0.5)
    -> Problem
{
    std::vector<Value> range;
    for (std::size_t v = 0; v < k; ++v)
        range.push_back(std::to_string(v));
    Domain full(range);

    Problem p;
    std::vector<std::string> names;
    for (std::size_t v = 0; v < num_vars; ++v) {
        names.push_back("V" + std::to_string(v + 1));
        p.add_variable(names.back(), random_subdomain(full, rng));
    }
    for (std::size_t i = 0; i < num_constraints; ++i) {
        auto arity = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(3, num_vars))(rng);
        std::vector<Row> rows;
        std::bernoulli_distribution keep(density);
        Row row(arity, 0);
        while (true) {
            if (keep(rng))
                rows.push_back(row);
            std::size_t c = arity;
            while (c-- > 0) {
                if (++row[c] < k)
                    break;
                row[c] = 0;
            }
            if (c == std::size_t(-1))
                break;
        }
        if (rows.empty())
            rows.push_back(Row(arity, 0));
        auto rel = shared(Relation::from_rows("c" + std::to_string(i + 1), std::vector<Domain>(arity, full), rows));
        auto order = names;
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(arity);
        p.add_constraint(rel, order);
    }
    return p;
}

inline auto sorted(RuleSet rs) -> RuleSet
{
    std::sort(rs.begin(), rs.end());
    return rs;
}

inline auto sorted(InclusionRuleSet rs) -> InclusionRuleSet
{
    std::sort(rs.begin(), rs.end());
    return rs;
}

inline auto sorted(std::vector<Solution> s) -> std::vector<Solution>
{
    std::sort(s.begin(), s.end());
    return s;
}

/// Parses one native-format membership rule.
inline auto rule(const Relation & rel, std::string_view text) -> Rule
{
    auto rs = parse_native_rules(rel, text);
    return rs.at(0);
}

inline auto inclusion_rule(const Relation & rel, std::string_view text) -> InclusionRule
{
    auto rs = parse_native_inclusion_rules(rel, text);
    return rs.at(0);
}

inline auto rendered(const Relation & rel, const RuleSet & rs) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (const auto & r : rs)
        out.push_back(render_rule(rel, r));
    return out;
}

inline auto rendered(const Relation & rel, const InclusionRuleSet & rs) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (const auto & r : rs)
        out.push_back(render_rule(rel, r));
    return out;
}

/// Final domains as `NAME={a,b}` strings, or {"INCONSISTENT"}.
inline auto domains_of(const Problem & p, const DomainStore & s) -> std::vector<std::string>
{
    if (s.inconsistent())
        return { "INCONSISTENT" };
    std::vector<std::string> out;
    for (std::size_t v = 0; v < p.num_variables(); ++v)
        out.push_back(p.variable(v).name + "=" + s.render(p, v));
    return out;
}

/// Tuple membership by value tokens; false for tokens outside the column domains.
inline auto has_tuple(const Relation & rel, const std::vector<Value> & tuple) -> bool
{
    if (tuple.size() != rel.arity())
        return false;
    Row row;
    for (std::size_t c = 0; c < tuple.size(); ++c) {
        auto id = rel.column_domain(c).find(tuple[c]);
        if (! id)
            return false;
        row.push_back(*id);
    }
    return rel.contains(row);
}

inline auto problem_from(std::string_view text) -> Problem
{
    return parse_problem(text, source_dir() / "samples");
}

}
