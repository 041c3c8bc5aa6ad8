#pragma once

#include <rulegen/propagation.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rulegen {

/// A total assignment, one value per problem variable in declaration order.
struct Solution {
    std::vector<Value> values;

    friend auto operator<=>(const Solution &, const Solution &) = default;
};

/// `VAR=value` pairs in declaration order, comma-separated.
inline auto render_solution(const Problem & problem, const Solution & s) -> std::string
{
    std::string text;
    for (std::size_t v = 0; v < s.values.size(); ++v)
        text += (v ? ", " : "") + problem.variable(v).name + "=" + s.values[v];
    return text;
}

inline auto satisfies(const Problem & problem, const std::vector<std::size_t> & locals) -> bool
{
    for (const auto & scope : problem.constraints()) {
        Row row(scope.arity());
        for (std::size_t col = 0; col < scope.arity(); ++col) {
            const auto & value = problem.variable(scope.var(col)).domain[static_cast<ValueId>(locals[scope.var(col)])];
            row[col] = *scope.relation().column_domain(col).find(value);
        }
        if (! scope.relation().contains(row))
            return false;
    }
    return true;
}

struct SearchStats {
    std::size_t nodes = 0;
    std::size_t failures = 0;
    std::size_t prunings = 0;
};

struct SearchResult {
    std::vector<Solution> solutions;
    SearchStats stats;
};

namespace detail {
    class Labeling {
    public:
        Labeling(const Problem & problem, const PropagatorSet & props, std::optional<std::size_t> limit,
                const FixpointOptions & options) :
            problem_(problem), props_(props), limit_(limit), options_(options)
        {
        }

        auto run() -> SearchResult
        {
            visit(DomainStore(problem_), { });
            return std::move(result_);
        }

    private:
        auto done() const -> bool { return limit_ && result_.solutions.size() >= *limit_; }

        void visit(DomainStore store, std::span<const std::size_t> touched)
        {
            ++result_.stats.nodes;
            FixpointStats fs;
            store = fixpoint(problem_, props_, std::move(store), options_, &fs, touched);
            result_.stats.prunings += fs.prunings;
            if (store.inconsistent()) {
                ++result_.stats.failures;
                return;
            }

            std::optional<std::size_t> branch;
            for (std::size_t v = 0; v < store.num_variables() && ! branch; ++v)
                if (store.size(v) > 1)
                    branch = v;

            if (! branch) {
                std::vector<std::size_t> locals;
                for (std::size_t v = 0; v < store.num_variables(); ++v)
                    locals.push_back(store.domain(v).find_first());
                if (! satisfies(problem_, locals)) {
                    ++result_.stats.failures;
                    return;
                }
                Solution s;
                for (std::size_t v = 0; v < locals.size(); ++v)
                    s.values.push_back(problem_.variable(v).domain[static_cast<ValueId>(locals[v])]);
                result_.solutions.push_back(std::move(s));
                return;
            }

            const auto var = *branch;
            const auto dom = store.domain(var);
            for (auto local = dom.find_first(); local != ValueSet::npos && ! done(); local = dom.find_next(local)) {
                auto child = store;
                child.assign(var, local);
                const std::size_t changed[] = { var };
                visit(std::move(child), changed);
            }
        }

        const Problem & problem_;
        const PropagatorSet & props_;
        std::optional<std::size_t> limit_;
        const FixpointOptions & options_;
        SearchResult result_;
    };
}

/// Depth-first labeling: propagate, branch on the first variable (declaration
/// order) with more than one value, try its values in domain order, and
/// propagate again after each assignment. Returns all solutions, or the first
/// `limit`, in search order.
inline auto solve_all(const Problem & problem, const PropagatorSet & props, std::optional<std::size_t> limit = std::nullopt,
        const FixpointOptions & options = { }) -> SearchResult
{
    return detail::Labeling(problem, props, limit, options).run();
}

inline auto solve_all(const Problem & problem, Mode mode, std::optional<std::size_t> limit = std::nullopt) -> SearchResult
{
    return solve_all(problem, PropagatorSet::build(problem, mode), limit);
}

inline constexpr std::size_t brute_force_limit = 1'000'000;

/// Every total assignment in the product of the declared domains that lies
/// in every constraint, in lexicographic (declaration, domain) order.
inline auto brute_force_solutions(const Problem & problem, std::size_t max_product = brute_force_limit)
    -> std::vector<Solution>
{
    std::size_t product = 1;
    for (const auto & v : problem.variables()) {
        product *= v.domain.size();
        if (product > max_product)
            throw UsageError("search space exceeds " + std::to_string(max_product) + " assignments");
    }

    std::vector<Solution> result;
    const auto n = problem.num_variables();
    std::vector<std::size_t> locals(n, 0);
    for (std::size_t count = 0; count < product; ++count) {
        if (satisfies(problem, locals)) {
            Solution s;
            for (std::size_t v = 0; v < n; ++v)
                s.values.push_back(problem.variable(v).domain[static_cast<ValueId>(locals[v])]);
            result.push_back(std::move(s));
        }
        for (std::size_t v = n; v-- > 0;) {
            if (++locals[v] < problem.variable(v).domain.size())
                break;
            locals[v] = 0;
        }
    }
    return result;
}

}
