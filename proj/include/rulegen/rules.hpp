#pragma once

#include <rulegen/combinations.hpp>
#include <rulegen/relation.hpp>

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace rulegen {

/// `column = value` inside a rule premise.
struct Literal {
    std::size_t column;
    ValueId value;

    friend auto operator<=>(const Literal &, const Literal &) = default;
};

/// Membership rule `X = s -> y != a`. Premise literals are sorted by
/// strictly increasing column; the conclusion column is not among them.
struct Rule {
    std::vector<Literal> premise;
    std::size_t conclusion_column;
    ValueId conclusion_value;

    friend auto operator<=>(const Rule &, const Rule &) = default;
};

using RuleSet = std::vector<Rule>;

/// Throws UsageError unless `r` is a well-formed rule for `rel`.
inline void check_rule(const Relation & rel, const Rule & r)
{
    if (r.conclusion_column >= rel.arity())
        throw UsageError("rule conclusion column out of range");
    if (r.conclusion_value >= rel.column_domain(r.conclusion_column).size())
        throw UsageError("rule conclusion value out of range");
    for (std::size_t i = 0; i < r.premise.size(); ++i) {
        const auto & lit = r.premise[i];
        if (lit.column >= rel.arity() || lit.value >= rel.column_domain(lit.column).size())
            throw UsageError("rule premise literal out of range");
        if (i > 0 && r.premise[i - 1].column >= lit.column)
            throw UsageError("rule premise columns must be strictly increasing");
        if (lit.column == r.conclusion_column)
            throw UsageError("rule conclusion column occurs in its premise");
    }
}

inline auto premise_matches(const std::vector<Literal> & premise, const Row & row) -> bool
{
    return std::all_of(premise.begin(), premise.end(),
            [&] (const Literal & lit) { return row[lit.column] == lit.value; });
}

/// No tuple matching the premise has the excluded value (vacuous when none match).
inline auto rule_is_valid(const Relation & rel, const Rule & r) -> bool
{
    return std::none_of(rel.rows().begin(), rel.rows().end(), [&] (const Row & row) {
        return premise_matches(r.premise, row) && row[r.conclusion_column] == r.conclusion_value;
    });
}

/// Some tuple matches the premise.
inline auto rule_is_feasible(const Relation & rel, const Rule & r) -> bool
{
    return std::any_of(rel.rows().begin(), rel.rows().end(),
            [&] (const Row & row) { return premise_matches(r.premise, row); });
}

/// True iff `r1` extends `r2`: same conclusion and r2's premise is a
/// sub-assignment of r1's. Reflexive.
inline auto rule_extends(const Rule & r1, const Rule & r2) -> bool
{
    if (r1.conclusion_column != r2.conclusion_column || r1.conclusion_value != r2.conclusion_value)
        return false;
    return std::includes(r1.premise.begin(), r1.premise.end(), r2.premise.begin(), r2.premise.end());
}

namespace detail {
    /// Emitted rules bucketed by conclusion, for the "extends an element of L" test.
    class RuleIndex {
    public:
        auto extends_any(const Rule & r) const -> bool
        {
            auto it = by_conclusion_.find({ r.conclusion_column, r.conclusion_value });
            if (it == by_conclusion_.end())
                return false;
            return std::any_of(it->second.begin(), it->second.end(),
                    [&] (const std::vector<Literal> & premise) {
                        return std::includes(r.premise.begin(), r.premise.end(), premise.begin(), premise.end());
                    });
        }

        void insert(const Rule & r) { by_conclusion_[{ r.conclusion_column, r.conclusion_value }].push_back(r.premise); }

    private:
        std::map<std::pair<std::size_t, ValueId>, std::vector<std::vector<Literal>>> by_conclusion_;
    };
}

/// All minimal valid rules for `rel` whose premise has at most `max_premise`
/// columns (default and cap: arity - 1).
///
/// Premise sizes ascend from 0. For each size the column subsets come in
/// lexicographic order, assignments in order of first occurrence in the
/// tuple table, conclusion columns ascending and conclusion values in
/// column-domain order. A candidate is kept when it is valid and does not
/// extend a rule kept earlier.
inline auto generate_rules(const Relation & rel, std::optional<std::size_t> max_premise = std::nullopt) -> RuleSet
{
    const auto n = rel.arity();
    const auto limit = std::min(max_premise.value_or(n - 1), n - 1);

    RuleSet result;
    detail::RuleIndex index;

    for (std::size_t size = 0; size <= limit; ++size) {
        for_each_combination(n, size, [&] (const std::vector<std::size_t> & cols) {
            std::vector<std::size_t> free_cols;
            for (std::size_t c = 0; c < n; ++c)
                if (! std::binary_search(cols.begin(), cols.end(), c))
                    free_cols.push_back(c);

            std::set<Row> seen;
            for (const auto & source : rel.rows()) {
                Row assignment = tuple_project(source, cols);
                if (! seen.insert(assignment).second)
                    continue;

                std::vector<Literal> premise;
                for (std::size_t i = 0; i < cols.size(); ++i)
                    premise.push_back(Literal{ cols[i], assignment[i] });

                // values of each free column that co-occur with the assignment
                std::vector<ValueSet> supported;
                for (auto y : free_cols)
                    supported.emplace_back(rel.column_domain(y).size());
                for (const auto & row : rel.rows())
                    if (premise_matches(premise, row))
                        for (std::size_t j = 0; j < free_cols.size(); ++j)
                            supported[j].set(row[free_cols[j]]);

                for (std::size_t j = 0; j < free_cols.size(); ++j) {
                    for (ValueId d = 0; d < rel.column_domain(free_cols[j]).size(); ++d) {
                        if (supported[j].test(d))
                            continue;
                        Rule r{ premise, free_cols[j], d };
                        if (! index.extends_any(r)) {
                            index.insert(r);
                            result.push_back(std::move(r));
                        }
                    }
                }
            }
        });
    }
    return result;
}

/// Rules sharing one premise, with conclusions sorted by (column, value id).
struct RuleGroup {
    std::vector<Literal> premise;
    std::vector<Literal> conclusions;

    friend auto operator==(const RuleGroup &, const RuleGroup &) -> bool = default;
};

/// Groups rules by identical premise; groups appear in order of first occurrence.
inline auto merge_by_premise(const RuleSet & rules) -> std::vector<RuleGroup>
{
    std::vector<RuleGroup> groups;
    std::map<std::vector<Literal>, std::size_t> position;
    for (const auto & r : rules) {
        auto [it, fresh] = position.emplace(r.premise, groups.size());
        if (fresh)
            groups.push_back(RuleGroup{ r.premise, { } });
        groups[it->second].conclusions.push_back(Literal{ r.conclusion_column, r.conclusion_value });
    }
    for (auto & g : groups)
        std::sort(g.conclusions.begin(), g.conclusions.end());
    return groups;
}

/// One single-conclusion group per rule, in rule order.
inline auto singleton_groups(const RuleSet & rules) -> std::vector<RuleGroup>
{
    std::vector<RuleGroup> groups;
    for (const auto & r : rules)
        groups.push_back(RuleGroup{ r.premise, { Literal{ r.conclusion_column, r.conclusion_value } } });
    return groups;
}

/// Inverse of merge_by_premise up to rule order.
inline auto split_groups(const std::vector<RuleGroup> & groups) -> RuleSet
{
    RuleSet rules;
    for (const auto & g : groups)
        for (const auto & c : g.conclusions)
            rules.push_back(Rule{ g.premise, c.column, c.value });
    return rules;
}

}
