#pragma once

// Exhaustive reference implementations. They work straight from the
// definitions (validity, feasibility, extension) and share no enumeration
// code with the generators.

#include <rulegen/inclusion.hpp>
#include <rulegen/rules.hpp>

#include <cstdint>
#include <map>

namespace rulegen {

inline constexpr std::size_t oracle_candidate_limit = 2'000'000;

/// Every syntactically possible rule over the full column domains, kept when
/// valid and feasible and not a proper extension of another valid rule (the
/// rules it properly extends are those over its proper sub-premises).
inline auto brute_force_minimal_rules(const Relation & rel) -> RuleSet
{
    const auto n = rel.arity();

    // premise count: product over columns of (|D_c| + 1)
    std::size_t premises = 1;
    if (n > 20)
        throw UsageError("relation " + rel.name() + " too large for the rule oracle");
    for (const auto & d : rel.column_domains()) {
        premises *= d.size() + 1;
        if (premises > oracle_candidate_limit)
            throw UsageError("relation " + rel.name() + " too large for the rule oracle");
    }

    RuleSet result;

    // each column is absent (digit 0) or fixed to value digit-1
    std::vector<std::size_t> digits(n, 0);
    for (std::size_t count = 0; count < premises; ++count) {
        std::vector<Literal> premise;
        for (std::size_t c = 0; c < n; ++c)
            if (digits[c] > 0)
                premise.push_back(Literal{ c, static_cast<ValueId>(digits[c] - 1) });

        for (std::size_t y = 0; y < n; ++y) {
            if (digits[y] > 0)
                continue;
            for (ValueId a = 0; a < rel.column_domain(y).size(); ++a) {
                Rule r{ premise, y, a };
                if (! rule_is_valid(rel, r) || ! rule_is_feasible(rel, r))
                    continue;
                // r properly extends exactly the rules over proper sub-premises
                bool minimal = true;
                for (std::uint64_t keep = 0; minimal && keep + 1 < (std::uint64_t{ 1 } << premise.size()); ++keep) {
                    Rule general{ { }, y, a };
                    for (std::size_t i = 0; i < premise.size(); ++i)
                        if (keep & (std::uint64_t{ 1 } << i))
                            general.premise.push_back(premise[i]);
                    minimal = ! rule_is_valid(rel, general);
                }
                if (minimal)
                    result.push_back(std::move(r));
            }
        }

        for (std::size_t c = 0; c < n; ++c) {
            if (++digits[c] <= rel.column_domain(c).size())
                break;
            digits[c] = 0;
        }
    }

    std::sort(result.begin(), result.end());
    return result;
}

/// Every inclusion rule whose premise sets are nonempty subsets of the column
/// projections (full projections included), filtered to valid, feasible and
/// minimal by pairwise extension checks.
inline auto brute_force_minimal_inclusion_rules(const Relation & rel) -> InclusionRuleSet
{
    const auto n = rel.arity();

    std::vector<std::vector<ValueId>> projection(n);
    std::size_t premises = 1;
    for (std::size_t c = 0; c < n; ++c) {
        auto values = column_values(rel, c);
        for (auto v = values.find_first(); v != ValueSet::npos; v = values.find_next(v))
            projection[c].push_back(static_cast<ValueId>(v));
        if (projection[c].size() > 20)
            throw UsageError("relation " + rel.name() + " too large for the inclusion-rule oracle");
        premises *= std::size_t{ 1 } << projection[c].size();
        if (premises > oracle_candidate_limit)
            throw UsageError("relation " + rel.name() + " too large for the inclusion-rule oracle");
    }

    std::map<std::pair<std::size_t, ValueId>, InclusionRuleSet> candidates;

    // each column holds a bitmask over its projection; mask 0 = absent
    std::vector<std::uint64_t> masks(n, 0);
    for (std::size_t count = 0; count < premises; ++count) {
        std::vector<SetLiteral> premise;
        for (std::size_t c = 0; c < n; ++c) {
            if (masks[c] == 0)
                continue;
            ValueSet set(rel.column_domain(c).size());
            for (std::size_t i = 0; i < projection[c].size(); ++i)
                if (masks[c] & (std::uint64_t{ 1 } << i))
                    set.set(projection[c][i]);
            premise.push_back(SetLiteral{ c, std::move(set) });
        }

        for (std::size_t y = 0; y < n; ++y) {
            if (masks[y] != 0)
                continue;
            for (ValueId a = 0; a < rel.column_domain(y).size(); ++a) {
                InclusionRule r{ premise, y, a };
                if (inclusion_is_valid(rel, r) && inclusion_is_feasible(rel, r))
                    candidates[{ y, a }].push_back(std::move(r));
            }
        }

        for (std::size_t c = 0; c < n; ++c) {
            if (++masks[c] < (std::uint64_t{ 1 } << projection[c].size()))
                break;
            masks[c] = 0;
        }
    }

    InclusionRuleSet result;
    for (const auto & [conclusion, rules] : candidates)
        for (const auto & r : rules) {
            bool minimal = std::none_of(rules.begin(), rules.end(),
                    [&] (const InclusionRule & other) { return ! (other == r) && inclusion_extends(r, other); });
            if (minimal)
                result.push_back(r);
        }
    std::sort(result.begin(), result.end());
    return result;
}

}
