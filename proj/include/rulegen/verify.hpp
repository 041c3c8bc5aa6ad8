#pragma once

// Property checks behind `rulegen verify`: generators against the exhaustive
// oracles, and the consistency theorems on random domain restrictions of one
// relation.

#include <rulegen/oracle.hpp>
#include <rulegen/search.hpp>

#include <algorithm>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace rulegen {

struct PropertyResult {
    std::string name;
    bool passed = true;
    std::string detail;
    bool skipped = false;
};

struct VerificationReport {
    std::vector<PropertyResult> properties;
    std::vector<std::string> notes;

    auto passed() const -> bool
    {
        return std::all_of(properties.begin(), properties.end(), [] (const PropertyResult & p) { return p.passed; });
    }
};

/// A random nonempty subset of `d`, each value kept with probability 1/2.
template <typename Rng>
auto random_subdomain(const Domain & d, Rng & rng, std::size_t max_size = 0) -> Domain
{
    std::vector<Value> kept;
    std::bernoulli_distribution coin(0.5);
    for (const auto & v : d)
        if (coin(rng))
            kept.push_back(v);
    if (kept.empty())
        kept.push_back(d[static_cast<ValueId>(std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng))]);
    if (max_size && kept.size() > max_size) {
        std::shuffle(kept.begin(), kept.end(), rng);
        kept.resize(max_size);
        std::sort(kept.begin(), kept.end(), [&] (const Value & a, const Value & b) { return *d.find(a) < *d.find(b); });
    }
    return Domain(std::move(kept));
}

/// Problem with variables V1..Vn over `doms` and one scope of `rel` over them;
/// when `pi` is given, a second scope binds column c to variable V(pi[c]+1).
inline auto single_relation_problem(std::shared_ptr<const Relation> rel, const std::vector<Domain> & doms,
        const std::vector<std::size_t> * pi = nullptr) -> Problem
{
    Problem p;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < rel->arity(); ++c) {
        names.push_back("V" + std::to_string(c + 1));
        p.add_variable(names.back(), doms[c]);
    }
    p.add_constraint(rel, names);
    if (pi) {
        std::vector<std::string> permuted;
        for (std::size_t c = 0; c < rel->arity(); ++c)
            permuted.push_back(names[(*pi)[c]]);
        p.add_constraint(rel, permuted);
    }
    return p;
}

namespace detail {
    inline auto describe_domains(const Problem & p, const DomainStore & s) -> std::string
    {
        if (s.inconsistent())
            return "INCONSISTENT";
        std::string text;
        for (std::size_t v = 0; v < p.num_variables(); ++v)
            text += (v ? " " : "") + p.variable(v).name + "=" + s.render(p, v);
        return text;
    }

    /// All column domains equal, so any column may be bound to any variable.
    inline auto uniform_columns(const Relation & rel) -> bool
    {
        const auto & doms = rel.column_domains();
        return std::all_of(doms.begin(), doms.end(), [&] (const Domain & d) { return d == doms.front(); });
    }

    inline auto describe_problem(const Problem & p) -> std::string
    {
        return describe_domains(p, DomainStore(p));
    }
}

/// Runs every property for `rel` with `trials` random restrictions drawn from
/// a generator seeded with `seed`. Throws UsageError when the relation is too
/// large for the oracles.
inline auto run_verification(const Relation & rel, std::size_t trials, std::uint64_t seed) -> VerificationReport
{
    VerificationReport report;
    std::mt19937_64 rng(seed);
    auto shared = std::make_shared<const Relation>(rel);
    const auto n = rel.arity();

    {
        auto generated = generate_rules(rel);
        std::sort(generated.begin(), generated.end());
        auto oracle = brute_force_minimal_rules(rel);
        report.properties.push_back({ "rules-match-oracle", generated == oracle,
                std::to_string(generated.size()) + " generated, " + std::to_string(oracle.size()) + " from oracle" });
    }
    {
        auto generated = generate_inclusion_rules(rel);
        std::sort(generated.begin(), generated.end());
        auto oracle = brute_force_minimal_inclusion_rules(rel);
        report.properties.push_back({ "inclusion-rules-match-oracle", generated == oracle,
                std::to_string(generated.size()) + " generated, " + std::to_string(oracle.size()) + " from oracle" });
    }

    PropertyResult inclusion_gac{ "inclusion-fixpoint-equals-gac", true, { } };
    PropertyResult binary_gac{ "binary-domain-rule-fixpoint-equals-gac", true, { } };
    PropertyResult arc_rule{ "gac-result-is-rule-consistent", true, { } };
    PropertyResult weaker{ "rule-fixpoint-contains-gac", true, { } };
    std::size_t witnesses = 0;

    const bool binary_base = std::all_of(rel.column_domains().begin(), rel.column_domains().end(),
            [] (const Domain & d) { return d.size() <= 2; });

    auto fail = [] (PropertyResult & p, const std::string & text) {
        if (p.passed)
            p.detail = text;
        p.passed = false;
    };

    // an empty relation yields no rules, so the comparisons with GAC say nothing
    const std::size_t rounds = rel.empty() ? 0 : trials;
    for (std::size_t trial = 0; trial < rounds; ++trial) {
        std::vector<Domain> doms;
        for (const auto & d : rel.column_domains())
            doms.push_back(random_subdomain(d, rng));
        std::vector<std::size_t> pi(n);
        std::iota(pi.begin(), pi.end(), std::size_t{ 0 });
        std::shuffle(pi.begin(), pi.end(), rng);
        // every other trial adds a second, permuted scope
        auto problem = single_relation_problem(shared, doms, trial % 2 && detail::uniform_columns(rel) ? &pi : nullptr);

        auto gac = gac_filter(problem);
        auto incl = fixpoint(problem, PropagatorSet::build(problem, Mode::inclusion));
        auto memb = fixpoint(problem, PropagatorSet::build(problem, Mode::membership));

        if (! (incl == gac))
            fail(inclusion_gac, "trial " + std::to_string(trial) + ": " + detail::describe_problem(problem)
                    + " inclusion " + detail::describe_domains(problem, incl) + " gac "
                    + detail::describe_domains(problem, gac));
        if (! check_rule_consistent(problem, gac))
            if (! gac.inconsistent())
                fail(arc_rule, "trial " + std::to_string(trial) + ": " + detail::describe_problem(problem));

        bool contains = memb.inconsistent() ? gac.inconsistent() : true;
        if (! memb.inconsistent() && ! gac.inconsistent())
            for (std::size_t v = 0; v < problem.num_variables(); ++v)
                contains = contains && gac.domain(v).is_subset_of(memb.domain(v));
        if (! contains)
            fail(weaker, "trial " + std::to_string(trial) + ": " + detail::describe_problem(problem));
        else if (! (memb == gac)) {
            if (witnesses++ == 0)
                report.notes.push_back("witness: " + detail::describe_problem(problem) + " rules "
                        + detail::describe_domains(problem, memb) + " gac " + detail::describe_domains(problem, gac));
        }

        // binary-domain theorem: the base itself, or a restriction of it to at
        // most two values per column around a random tuple, taken as a new base
        auto base = shared;
        if (! binary_base) {
            const auto & anchor = rel.row(std::uniform_int_distribution<std::size_t>(0, rel.size() - 1)(rng));
            std::vector<Domain> small;
            for (std::size_t c = 0; c < n; ++c) {
                const auto & d = rel.column_domain(c);
                auto other = static_cast<ValueId>(std::uniform_int_distribution<std::size_t>(0, d.size() - 1)(rng));
                std::vector<Value> values{ d[std::min(anchor[c], other)] };
                if (other != anchor[c])
                    values.push_back(d[std::max(anchor[c], other)]);
                small.emplace_back(std::move(values));
            }
            base = std::make_shared<const Relation>(restrict(rel, small));
        }
        std::vector<Domain> bdoms;
        for (const auto & d : base->column_domains())
            bdoms.push_back(random_subdomain(d, rng));
        auto bproblem = single_relation_problem(base, bdoms, trial % 2 && detail::uniform_columns(*base) ? &pi : nullptr);
        auto bgac = gac_filter(bproblem);
        auto brule = fixpoint(bproblem, PropagatorSet::build(bproblem, Mode::membership));
        if (! (bgac == brule))
            fail(binary_gac, "trial " + std::to_string(trial) + ": " + detail::describe_problem(bproblem)
                    + " rules " + detail::describe_domains(bproblem, brule) + " gac "
                    + detail::describe_domains(bproblem, bgac));
    }

    for (auto * p : { &inclusion_gac, &binary_gac, &arc_rule, &weaker }) {
        if (rel.empty()) {
            p->skipped = true;
            p->detail = "empty relation";
        }
        else if (p->passed)
            p->detail = std::to_string(trials) + " trials";
    }
    weaker.detail += weaker.passed && ! rel.empty() ? ", strictly larger in " + std::to_string(witnesses) : "";

    report.properties.push_back(std::move(inclusion_gac));
    report.properties.push_back(std::move(binary_gac));
    report.properties.push_back(std::move(arc_rule));
    report.properties.push_back(std::move(weaker));
    return report;
}

}
