#pragma once

#include <rulegen/combinations.hpp>
#include <rulegen/relation.hpp>
#include <rulegen/rules.hpp>

#include <algorithm>
#include <iterator>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

namespace rulegen {

/// `column in values` inside an inclusion-rule premise. `values` is a
/// nonempty subset of the column domain.
struct SetLiteral {
    std::size_t column;
    ValueSet values;

    friend auto operator==(const SetLiteral &, const SetLiteral &) -> bool = default;
    friend auto operator<(const SetLiteral & a, const SetLiteral & b) -> bool
    {
        return std::tie(a.column, a.values) < std::tie(b.column, b.values);
    }
};

/// Inclusion rule `X in S -> y != a`; premise columns strictly increasing.
struct InclusionRule {
    std::vector<SetLiteral> premise;
    std::size_t conclusion_column;
    ValueId conclusion_value;

    friend auto operator==(const InclusionRule &, const InclusionRule &) -> bool = default;
    friend auto operator<(const InclusionRule & a, const InclusionRule & b) -> bool
    {
        return std::tie(a.premise, a.conclusion_column, a.conclusion_value)
            < std::tie(b.premise, b.conclusion_column, b.conclusion_value);
    }
};

using InclusionRuleSet = std::vector<InclusionRule>;

inline void check_inclusion_rule(const Relation & rel, const InclusionRule & r)
{
    if (r.conclusion_column >= rel.arity())
        throw UsageError("inclusion rule conclusion column out of range");
    if (r.conclusion_value >= rel.column_domain(r.conclusion_column).size())
        throw UsageError("inclusion rule conclusion value out of range");
    for (std::size_t i = 0; i < r.premise.size(); ++i) {
        const auto & lit = r.premise[i];
        if (lit.column >= rel.arity() || lit.values.size() != rel.column_domain(lit.column).size())
            throw UsageError("inclusion rule premise literal does not fit its column");
        if (lit.values.none())
            throw UsageError("inclusion rule premise set is empty");
        if (i > 0 && r.premise[i - 1].column >= lit.column)
            throw UsageError("inclusion rule premise columns must be strictly increasing");
        if (lit.column == r.conclusion_column)
            throw UsageError("inclusion rule conclusion column occurs in its premise");
    }
}

inline auto premise_matches(const std::vector<SetLiteral> & premise, const Row & row) -> bool
{
    return std::all_of(premise.begin(), premise.end(),
            [&] (const SetLiteral & lit) { return lit.values.test(row[lit.column]); });
}

inline auto inclusion_is_valid(const Relation & rel, const InclusionRule & r) -> bool
{
    return std::none_of(rel.rows().begin(), rel.rows().end(), [&] (const Row & row) {
        return premise_matches(r.premise, row) && row[r.conclusion_column] == r.conclusion_value;
    });
}

inline auto inclusion_is_feasible(const Relation & rel, const InclusionRule & r) -> bool
{
    return std::any_of(rel.rows().begin(), rel.rows().end(),
            [&] (const Row & row) { return premise_matches(r.premise, row); });
}

/// True iff `r1` extends `r2`: same conclusion, r2's premise columns are
/// among r1's and on each of them r1's set is inside r2's. Reflexive.
inline auto inclusion_extends(const InclusionRule & r1, const InclusionRule & r2) -> bool
{
    if (r1.conclusion_column != r2.conclusion_column || r1.conclusion_value != r2.conclusion_value)
        return false;
    auto it = r1.premise.begin();
    for (const auto & lit : r2.premise) {
        while (it != r1.premise.end() && it->column < lit.column)
            ++it;
        if (it == r1.premise.end() || it->column != lit.column || ! it->values.is_subset_of(lit.values))
            return false;
    }
    return true;
}

/// Lazily enumerates the weak assignments to the columns `cols`: tuples of
/// nonempty proper subsets of the column projections that some row lies in.
///
/// Order: descending total cardinality; within one total, size vectors in
/// descending lexicographic order; within one size vector, the product of
/// per-column subsets (first column slowest), each column's subsets of a
/// given size in lexicographic order of the projection's domain order. This
/// linearizes the pointwise-superset order, so a weak assignment always
/// comes before any pointwise smaller one.
class WeakAssignments {
public:
    WeakAssignments(const Relation & rel, std::vector<std::size_t> cols) : rel_(&rel), cols_(std::move(cols))
    {
        for (auto c : cols_) {
            auto projection = column_values(rel, c);
            std::vector<ValueId> members;
            for (auto v = projection.find_first(); v != ValueSet::npos; v = projection.find_next(v))
                members.push_back(static_cast<ValueId>(v));
            projections_.push_back(std::move(members));
        }

        // size vectors with 1 <= c_j <= |C[x_j]| - 1
        bool possible = std::all_of(projections_.begin(), projections_.end(),
                [] (const auto & p) { return p.size() >= 2; });
        if (possible) {
            std::vector<std::size_t> sizes(cols_.size(), 1);
            while (true) {
                size_vectors_.push_back(sizes);
                std::size_t j = sizes.size();
                while (j > 0 && sizes[j - 1] == projections_[j - 1].size() - 1)
                    sizes[--j] = 1;
                if (j == 0)
                    break;
                ++sizes[j - 1];
            }
            std::stable_sort(size_vectors_.begin(), size_vectors_.end(), [] (const auto & a, const auto & b) {
                auto sa = std::accumulate(a.begin(), a.end(), std::size_t{ 0 });
                auto sb = std::accumulate(b.begin(), b.end(), std::size_t{ 0 });
                if (sa != sb)
                    return sa > sb;
                return a > b;
            });
        }
        if (cols_.empty())
            size_vectors_.assign(1, { });
    }

    /// The next weak assignment (one set per column of `cols`), or nullopt.
    auto next() -> std::optional<std::vector<ValueSet>>
    {
        while (advance()) {
            auto sets = current_sets();
            if (jointly_feasible(sets))
                return sets;
        }
        return std::nullopt;
    }

private:
    auto advance() -> bool
    {
        if (! started_) {
            started_ = true;
            return load_size_vector();
        }
        // odometer over the per-column combinations, last column fastest
        for (std::size_t j = combos_.size(); j-- > 0;) {
            if (next_combination(combos_[j], projections_[j].size()))
                return true;
            combos_[j] = first_combination(combos_[j].size());
        }
        ++size_vector_;
        return load_size_vector();
    }

    auto load_size_vector() -> bool
    {
        if (size_vector_ >= size_vectors_.size())
            return false;
        combos_.clear();
        for (auto s : size_vectors_[size_vector_])
            combos_.push_back(first_combination(s));
        return true;
    }

    auto current_sets() const -> std::vector<ValueSet>
    {
        std::vector<ValueSet> sets;
        for (std::size_t j = 0; j < cols_.size(); ++j) {
            ValueSet set(rel_->column_domain(cols_[j]).size());
            for (auto pos : combos_[j])
                set.set(projections_[j][pos]);
            sets.push_back(std::move(set));
        }
        return sets;
    }

    auto jointly_feasible(const std::vector<ValueSet> & sets) const -> bool
    {
        return std::any_of(rel_->rows().begin(), rel_->rows().end(), [&] (const Row & row) {
            for (std::size_t j = 0; j < cols_.size(); ++j)
                if (! sets[j].test(row[cols_[j]]))
                    return false;
            return true;
        });
    }

    const Relation * rel_;
    std::vector<std::size_t> cols_;
    std::vector<std::vector<ValueId>> projections_;
    std::vector<std::vector<std::size_t>> size_vectors_;
    std::size_t size_vector_ = 0;
    std::vector<std::vector<std::size_t>> combos_;
    bool started_ = false;
};

/// Eager convenience wrapper over WeakAssignments.
inline auto weak_assignments(const Relation & rel, const std::vector<std::size_t> & cols)
    -> std::vector<std::vector<ValueSet>>
{
    std::vector<std::vector<ValueSet>> result;
    WeakAssignments stream(rel, cols);
    while (auto s = stream.next())
        result.push_back(std::move(*s));
    return result;
}

namespace detail {
    class InclusionRuleIndex {
    public:
        auto extends_any(const InclusionRule & r) const -> bool
        {
            auto it = by_conclusion_.find({ r.conclusion_column, r.conclusion_value });
            if (it == by_conclusion_.end())
                return false;
            return std::any_of(it->second.begin(), it->second.end(),
                    [&] (const InclusionRule & earlier) { return inclusion_extends(r, earlier); });
        }

        void insert(const InclusionRule & r) { by_conclusion_[{ r.conclusion_column, r.conclusion_value }].push_back(r); }

    private:
        std::map<std::pair<std::size_t, ValueId>, std::vector<InclusionRule>> by_conclusion_;
    };
}

/// All minimal valid inclusion rules for `rel` with at most `max_premise`
/// premise columns. Same loop structure as generate_rules, with weak
/// assignments (in decreasing order) in place of assignments.
inline auto generate_inclusion_rules(const Relation & rel, std::optional<std::size_t> max_premise = std::nullopt)
    -> InclusionRuleSet
{
    const auto n = rel.arity();
    const auto limit = std::min(max_premise.value_or(n - 1), n - 1);

    InclusionRuleSet result;
    detail::InclusionRuleIndex index;

    for (std::size_t size = 0; size <= limit; ++size) {
        for_each_combination(n, size, [&] (const std::vector<std::size_t> & cols) {
            std::vector<std::size_t> free_cols;
            for (std::size_t c = 0; c < n; ++c)
                if (! std::binary_search(cols.begin(), cols.end(), c))
                    free_cols.push_back(c);

            WeakAssignments stream(rel, cols);
            while (auto sets = stream.next()) {
                std::vector<SetLiteral> premise;
                for (std::size_t i = 0; i < cols.size(); ++i)
                    premise.push_back(SetLiteral{ cols[i], std::move((*sets)[i]) });

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
                        InclusionRule r{ premise, free_cols[j], d };
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

struct InclusionRuleGroup {
    std::vector<SetLiteral> premise;
    std::vector<Literal> conclusions;

    friend auto operator==(const InclusionRuleGroup &, const InclusionRuleGroup &) -> bool = default;
};

/// Groups inclusion rules by identical premise, first-occurrence order;
/// conclusions sorted by (column, value id).
inline auto merge_by_premise(const InclusionRuleSet & rules) -> std::vector<InclusionRuleGroup>
{
    std::vector<InclusionRuleGroup> groups;
    for (const auto & r : rules) {
        auto it = std::find_if(groups.begin(), groups.end(),
                [&] (const InclusionRuleGroup & g) { return g.premise == r.premise; });
        if (it == groups.end()) {
            groups.push_back(InclusionRuleGroup{ r.premise, { } });
            it = std::prev(groups.end());
        }
        it->conclusions.push_back(Literal{ r.conclusion_column, r.conclusion_value });
    }
    for (auto & g : groups)
        std::sort(g.conclusions.begin(), g.conclusions.end());
    return groups;
}

inline auto singleton_groups(const InclusionRuleSet & rules) -> std::vector<InclusionRuleGroup>
{
    std::vector<InclusionRuleGroup> groups;
    for (const auto & r : rules)
        groups.push_back(InclusionRuleGroup{ r.premise, { Literal{ r.conclusion_column, r.conclusion_value } } });
    return groups;
}

inline auto split_groups(const std::vector<InclusionRuleGroup> & groups) -> InclusionRuleSet
{
    InclusionRuleSet rules;
    for (const auto & g : groups)
        for (const auto & c : g.conclusions)
            rules.push_back(InclusionRule{ g.premise, c.column, c.value });
    return rules;
}

}
