#pragma once

#include <rulegen/inclusion.hpp>
#include <rulegen/native_format.hpp>
#include <rulegen/problem.hpp>
#include <rulegen/rules.hpp>

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rulegen {

/// Which propagators are attached to the constraints.
enum class Mode { membership, inclusion, gac };

inline auto mode_name(Mode mode) -> const char *
{
    switch (mode) {
        case Mode::membership: return "membership";
        case Mode::inclusion: return "inclusion";
        case Mode::gac: return "gac";
    }
    return "?";
}

/// Accepts `membership` (alias `rules`), `inclusion` and `gac`.
inline auto parse_mode(std::string_view text) -> Mode
{
    if (text == "membership" || text == "rules")
        return Mode::membership;
    if (text == "inclusion")
        return Mode::inclusion;
    if (text == "gac")
        return Mode::gac;
    throw UsageError("unknown mode '" + std::string(text) + "' (expected rules, inclusion or gac)");
}

/// Current domains of all problem variables during propagation. Each domain
/// is a subset of the variable's declared domain, indexed by its position in
/// that domain.
class DomainStore {
public:
    explicit DomainStore(const Problem & problem)
    {
        for (const auto & v : problem.variables())
            domains_.emplace_back(v.domain.size()).set();
    }

    auto num_variables() const noexcept -> std::size_t { return domains_.size(); }
    auto domain(std::size_t var) const -> const ValueSet & { return domains_.at(var); }
    auto size(std::size_t var) const -> std::size_t { return domains_.at(var).count(); }
    auto contains(std::size_t var, std::size_t local) const -> bool { return domains_.at(var).test(local); }
    auto inconsistent() const noexcept -> bool { return inconsistent_; }

    /// Removes one value. Returns true if it was present; the store turns
    /// inconsistent when the domain empties and ignores removals afterwards.
    auto remove(std::size_t var, std::size_t local) -> bool
    {
        if (inconsistent_ || ! domains_.at(var).test(local))
            return false;
        domains_[var].reset(local);
        if (domains_[var].none())
            inconsistent_ = true;
        return true;
    }

    /// Narrows `var` to `keep`; returns true if anything was removed.
    auto intersect(std::size_t var, const ValueSet & keep) -> bool
    {
        if (inconsistent_)
            return false;
        auto narrowed = domains_.at(var) & keep;
        if (narrowed == domains_[var])
            return false;
        domains_[var] = std::move(narrowed);
        if (domains_[var].none())
            inconsistent_ = true;
        return true;
    }

    void assign(std::size_t var, std::size_t local)
    {
        ValueSet only(domains_.at(var).size());
        only.set(local);
        intersect(var, only);
    }

    auto values(const Problem & problem, std::size_t var) const -> std::vector<Value>
    {
        return problem.variable(var).domain.select(domains_.at(var));
    }

    /// `{v1,v2}` in declaration order.
    auto render(const Problem & problem, std::size_t var) const -> std::string
    {
        std::string text = "{";
        auto vals = values(problem, var);
        for (std::size_t i = 0; i < vals.size(); ++i)
            text += (i ? "," : "") + vals[i];
        return text + "}";
    }

    /// The current domains as a fresh problem with the same constraints.
    auto as_problem(const Problem & problem) const -> Problem
    {
        std::vector<Domain> doms;
        for (std::size_t v = 0; v < domains_.size(); ++v)
            doms.emplace_back(values(problem, v));
        return problem.with_domains(doms);
    }

    /// Inconsistent stores compare equal whatever their leftover domains.
    friend auto operator==(const DomainStore & a, const DomainStore & b) -> bool
    {
        if (a.inconsistent_ || b.inconsistent_)
            return a.inconsistent_ == b.inconsistent_;
        return a.domains_ == b.domains_;
    }

private:
    std::vector<ValueSet> domains_;
    bool inconsistent_ = false;
};

/// Value translation between one scope's relation columns and the domains
/// of the variables bound to them.
class ScopeBinding {
public:
    ScopeBinding(const Problem & problem, std::size_t scope_index) : scope_(scope_index)
    {
        const auto & scope = problem.constraint(scope_index);
        relation_ = scope.relation_ptr();
        vars_ = scope.vars();
        to_local_.resize(scope.arity());
        to_code_.resize(scope.arity());
        for (std::size_t col = 0; col < scope.arity(); ++col) {
            const auto & column = relation_->column_domain(col);
            const auto & var_domain = problem.variable(vars_[col]).domain;
            to_local_[col].assign(column.size(), npos);
            for (std::size_t local = 0; local < var_domain.size(); ++local) {
                auto code = *column.find(var_domain[static_cast<ValueId>(local)]);
                to_local_[col][code] = local;
                to_code_[col].push_back(code);
            }
        }
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    auto scope_index() const noexcept -> std::size_t { return scope_; }
    auto relation() const noexcept -> const Relation & { return *relation_; }
    auto relation_ptr() const noexcept -> const std::shared_ptr<const Relation> & { return relation_; }
    auto vars() const noexcept -> const std::vector<std::size_t> & { return vars_; }
    auto var(std::size_t col) const -> std::size_t { return vars_.at(col); }

    /// Position of column value `code` in the bound variable's declared domain, or npos.
    auto local(std::size_t col, ValueId code) const -> std::size_t { return to_local_.at(col).at(code); }
    auto code(std::size_t col, std::size_t local) const -> ValueId { return to_code_.at(col).at(local); }

private:
    std::size_t scope_;
    std::shared_ptr<const Relation> relation_;
    std::vector<std::size_t> vars_;
    std::vector<std::vector<std::size_t>> to_local_;
    std::vector<std::vector<ValueId>> to_code_;
};

enum class Outcome { unchanged, pruned, wiped_out };

namespace detail {
    inline auto outcome_of(bool removed, const DomainStore & store) -> Outcome
    {
        if (! removed)
            return Outcome::unchanged;
        return store.inconsistent() ? Outcome::wiped_out : Outcome::pruned;
    }

    inline auto membership_fires(const DomainStore & store, const ScopeBinding & b, const Rule & r) -> bool
    {
        for (const auto & lit : r.premise) {
            auto local = b.local(lit.column, lit.value);
            auto var = b.var(lit.column);
            if (local == ScopeBinding::npos || store.size(var) != 1 || ! store.contains(var, local))
                return false;
        }
        return true;
    }

    inline auto inclusion_fires(const DomainStore & store, const ScopeBinding & b, const InclusionRule & r) -> bool
    {
        for (const auto & lit : r.premise) {
            const auto & dom = store.domain(b.var(lit.column));
            for (auto local = dom.find_first(); local != ValueSet::npos; local = dom.find_next(local))
                if (! lit.values.test(b.code(lit.column, local)))
                    return false;
        }
        return true;
    }

    inline auto conclusion_present(const DomainStore & store, const ScopeBinding & b, std::size_t col, ValueId value) -> bool
    {
        auto local = b.local(col, value);
        return local != ScopeBinding::npos && store.contains(b.var(col), local);
    }
}

/// Fires when every premise variable's domain equals the singleton of its
/// premise value; then removes the conclusion value.
inline auto apply_rule(DomainStore & store, const ScopeBinding & b, const Rule & r) -> Outcome
{
    if (store.inconsistent() || ! detail::membership_fires(store, b, r))
        return Outcome::unchanged;
    auto local = b.local(r.conclusion_column, r.conclusion_value);
    if (local == ScopeBinding::npos)
        return Outcome::unchanged;
    return detail::outcome_of(store.remove(b.var(r.conclusion_column), local), store);
}

/// Fires when every premise variable's domain is a subset of its premise
/// set; then removes the conclusion value.
inline auto apply_inclusion_rule(DomainStore & store, const ScopeBinding & b, const InclusionRule & r) -> Outcome
{
    if (store.inconsistent() || ! detail::inclusion_fires(store, b, r))
        return Outcome::unchanged;
    auto local = b.local(r.conclusion_column, r.conclusion_value);
    if (local == ScopeBinding::npos)
        return Outcome::unchanged;
    return detail::outcome_of(store.remove(b.var(r.conclusion_column), local), store);
}

/// Shrinks every variable of the scope to the values supported by some
/// tuple that lies inside the current domains. Variables that changed are
/// appended to `changed`.
inline auto revise_gac(DomainStore & store, const ScopeBinding & b, std::vector<std::size_t> * changed = nullptr)
    -> Outcome
{
    if (store.inconsistent())
        return Outcome::unchanged;
    const auto & rel = b.relation();
    std::vector<ValueSet> supported;
    for (std::size_t col = 0; col < rel.arity(); ++col)
        supported.emplace_back(store.domain(b.var(col)).size());

    for (const auto & row : rel.rows()) {
        bool inside = true;
        for (std::size_t col = 0; col < rel.arity() && inside; ++col)
            inside = detail::conclusion_present(store, b, col, row[col]);
        if (inside)
            for (std::size_t col = 0; col < rel.arity(); ++col)
                supported[col].set(b.local(col, row[col]));
    }

    bool removed = false;
    for (std::size_t col = 0; col < rel.arity() && ! store.inconsistent(); ++col)
        if (store.intersect(b.var(col), supported[col])) {
            removed = true;
            if (changed)
                changed->push_back(b.var(col));
        }
    return detail::outcome_of(removed, store);
}

/// Rules (or the GAC revision) attached to every scope of a problem.
/// Scopes sharing a relation share one generated rule set.
class PropagatorSet {
public:
    static auto build(const Problem & problem, Mode mode, std::optional<std::size_t> max_premise = std::nullopt)
        -> PropagatorSet
    {
        PropagatorSet set(problem, mode);
        std::map<const Relation *, std::shared_ptr<const RuleSet>> rules_cache;
        std::map<const Relation *, std::shared_ptr<const InclusionRuleSet>> inclusion_cache;
        for (const auto & b : set.bindings_) {
            const auto * key = b.relation_ptr().get();
            if (mode == Mode::membership) {
                auto & slot = rules_cache[key];
                if (! slot)
                    slot = std::make_shared<const RuleSet>(generate_rules(b.relation(), max_premise));
                set.rules_.push_back(slot);
            }
            else if (mode == Mode::inclusion) {
                auto & slot = inclusion_cache[key];
                if (! slot)
                    slot = std::make_shared<const InclusionRuleSet>(generate_inclusion_rules(b.relation(), max_premise));
                set.inclusion_rules_.push_back(slot);
            }
        }
        return set;
    }

    /// Membership propagators with explicitly supplied rules, one set per scope.
    static auto with_rules(const Problem & problem, std::vector<RuleSet> per_scope) -> PropagatorSet
    {
        PropagatorSet set(problem, Mode::membership);
        if (per_scope.size() != set.bindings_.size())
            throw UsageError("with_rules: one rule set per scope expected");
        for (std::size_t s = 0; s < per_scope.size(); ++s) {
            for (const auto & r : per_scope[s])
                check_rule(set.bindings_[s].relation(), r);
            set.rules_.push_back(std::make_shared<const RuleSet>(std::move(per_scope[s])));
        }
        return set;
    }

    static auto with_inclusion_rules(const Problem & problem, std::vector<InclusionRuleSet> per_scope) -> PropagatorSet
    {
        PropagatorSet set(problem, Mode::inclusion);
        if (per_scope.size() != set.bindings_.size())
            throw UsageError("with_inclusion_rules: one rule set per scope expected");
        for (std::size_t s = 0; s < per_scope.size(); ++s) {
            for (const auto & r : per_scope[s])
                check_inclusion_rule(set.bindings_[s].relation(), r);
            set.inclusion_rules_.push_back(std::make_shared<const InclusionRuleSet>(std::move(per_scope[s])));
        }
        return set;
    }

    auto mode() const noexcept -> Mode { return mode_; }
    auto num_scopes() const noexcept -> std::size_t { return bindings_.size(); }
    auto binding(std::size_t scope) const -> const ScopeBinding & { return bindings_.at(scope); }
    auto rules(std::size_t scope) const -> const RuleSet & { return *rules_.at(scope); }
    auto inclusion_rules(std::size_t scope) const -> const InclusionRuleSet & { return *inclusion_rules_.at(scope); }

private:
    PropagatorSet(const Problem & problem, Mode mode) : mode_(mode)
    {
        for (std::size_t s = 0; s < problem.constraints().size(); ++s)
            bindings_.emplace_back(problem, s);
    }

    Mode mode_;
    std::vector<ScopeBinding> bindings_;
    std::vector<std::shared_ptr<const RuleSet>> rules_;
    std::vector<std::shared_ptr<const InclusionRuleSet>> inclusion_rules_;
};

struct FixpointOptions {
    /// When set, the worklist is served in a seeded random order instead of FIFO.
    std::optional<std::uint64_t> shuffle_seed;
    /// One `FIRE ...` line per pruning rule application.
    std::ostream * trace = nullptr;
};

struct FixpointStats {
    std::size_t revisions = 0;
    std::size_t prunings = 0;
};

namespace detail {
    inline void trace_firing(std::ostream & out, const Problem & problem, const ScopeBinding & b,
            const std::string & what, std::size_t var, const std::string & before, const DomainStore & store)
    {
        out << "FIRE " << problem.describe_scope(b.scope_index()) << ' ' << what << " : "
            << problem.variable(var).name << ' ' << before << " => " << store.render(problem, var) << '\n';
    }
}

/// Chaotic iteration to the common fixpoint of all propagators, starting
/// from `store`. Only scopes touching a variable in `touched` are scheduled
/// initially; an empty `touched` schedules every scope. Whenever a variable
/// changes, every scope mentioning it is rescheduled. Stops at the first
/// emptied domain.
inline auto fixpoint(const Problem & problem, const PropagatorSet & props, DomainStore store,
        const FixpointOptions & options = { }, FixpointStats * stats = nullptr,
        std::span<const std::size_t> touched = { }) -> DomainStore
{
    if (store.inconsistent())
        return store;

    std::deque<std::size_t> worklist;
    std::vector<bool> queued(props.num_scopes(), false);
    auto schedule = [&] (std::size_t scope) {
        if (! queued[scope]) {
            queued[scope] = true;
            worklist.push_back(scope);
        }
    };
    if (touched.empty())
        for (std::size_t s = 0; s < props.num_scopes(); ++s)
            schedule(s);
    else
        for (auto v : touched)
            for (auto s : problem.scopes_of(v))
                schedule(s);

    std::optional<std::mt19937_64> rng;
    if (options.shuffle_seed)
        rng.emplace(*options.shuffle_seed);

    std::vector<std::size_t> changed;
    while (! worklist.empty() && ! store.inconsistent()) {
        std::size_t pick = 0;
        if (rng)
            pick = std::uniform_int_distribution<std::size_t>(0, worklist.size() - 1)(*rng);
        auto scope = worklist[pick];
        worklist.erase(worklist.begin() + static_cast<std::ptrdiff_t>(pick));
        queued[scope] = false;

        const auto & b = props.binding(scope);
        changed.clear();
        if (stats)
            ++stats->revisions;

        auto run = [&] (const auto & rule, auto && apply) {
            auto var = b.var(rule.conclusion_column);
            std::string before;
            if (options.trace)
                before = store.render(problem, var);
            if (apply(store, b, rule) != Outcome::unchanged) {
                changed.push_back(var);
                if (stats)
                    ++stats->prunings;
                if (options.trace)
                    detail::trace_firing(*options.trace, problem, b, "rule " + render_rule(b.relation(), rule), var,
                            before, store);
            }
        };

        switch (props.mode()) {
            case Mode::membership:
                for (const auto & r : props.rules(scope)) {
                    run(r, apply_rule);
                    if (store.inconsistent())
                        break;
                }
                break;
            case Mode::inclusion:
                for (const auto & r : props.inclusion_rules(scope)) {
                    run(r, apply_inclusion_rule);
                    if (store.inconsistent())
                        break;
                }
                break;
            case Mode::gac: {
                std::vector<std::string> before;
                if (options.trace)
                    for (auto v : b.vars())
                        before.push_back(store.render(problem, v));
                revise_gac(store, b, &changed);
                if (stats)
                    stats->prunings += changed.size();
                if (options.trace)
                    for (auto v : changed) {
                        auto col = static_cast<std::size_t>(std::find(b.vars().begin(), b.vars().end(), v) - b.vars().begin());
                        detail::trace_firing(*options.trace, problem, b, "gac", v, before[col], store);
                    }
                break;
            }
        }

        for (auto v : changed)
            for (auto s : problem.scopes_of(v))
                schedule(s);
    }
    return store;
}

inline auto fixpoint(const Problem & problem, const PropagatorSet & props, const FixpointOptions & options = { })
    -> DomainStore
{
    return fixpoint(problem, props, DomainStore(problem), options);
}

/// Generalized arc consistency by repeated support filtering, from `store`.
inline auto gac_filter(const Problem & problem, DomainStore store) -> DomainStore
{
    return fixpoint(problem, PropagatorSet::build(problem, Mode::gac), std::move(store));
}

inline auto gac_filter(const Problem & problem) -> DomainStore
{
    return gac_filter(problem, DomainStore(problem));
}

/// No minimal valid membership rule of any scope's relation would prune `store`.
inline auto check_rule_consistent(const Problem & problem, const DomainStore & store) -> bool
{
    if (store.inconsistent())
        return false;
    auto props = PropagatorSet::build(problem, Mode::membership);
    for (std::size_t s = 0; s < props.num_scopes(); ++s) {
        const auto & b = props.binding(s);
        for (const auto & r : props.rules(s))
            if (detail::membership_fires(store, b, r)
                && detail::conclusion_present(store, b, r.conclusion_column, r.conclusion_value))
                return false;
    }
    return true;
}

inline auto check_rule_consistent(const Problem & problem) -> bool
{
    return check_rule_consistent(problem, DomainStore(problem));
}

/// No minimal valid inclusion rule of any scope's relation would prune `store`.
inline auto check_inclusion_rule_consistent(const Problem & problem, const DomainStore & store) -> bool
{
    if (store.inconsistent())
        return false;
    auto props = PropagatorSet::build(problem, Mode::inclusion);
    for (std::size_t s = 0; s < props.num_scopes(); ++s) {
        const auto & b = props.binding(s);
        for (const auto & r : props.inclusion_rules(s))
            if (detail::inclusion_fires(store, b, r)
                && detail::conclusion_present(store, b, r.conclusion_column, r.conclusion_value))
                return false;
    }
    return true;
}

inline auto check_inclusion_rule_consistent(const Problem & problem) -> bool
{
    return check_inclusion_rule_consistent(problem, DomainStore(problem));
}

/// Every value of every variable has a supporting tuple, within the current
/// domains, in each constraint it occurs in.
inline auto check_arc_consistent(const Problem & problem, const DomainStore & store) -> bool
{
    if (store.inconsistent())
        return false;
    for (std::size_t s = 0; s < problem.constraints().size(); ++s) {
        ScopeBinding b(problem, s);
        auto copy = store;
        if (revise_gac(copy, b) != Outcome::unchanged)
            return false;
    }
    return true;
}

inline auto check_arc_consistent(const Problem & problem) -> bool
{
    return check_arc_consistent(problem, DomainStore(problem));
}

}
