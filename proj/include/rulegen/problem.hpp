#pragma once

#include <rulegen/relation.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rulegen {

/// One constraint instance: a relation whose columns are bound, in order,
/// to pairwise distinct problem variables. The ordering plays the role of
/// the column permutation.
class Scope {
public:
    Scope(std::shared_ptr<const Relation> relation, std::vector<std::size_t> vars) :
        relation_(std::move(relation)), vars_(std::move(vars))
    {
        if (! relation_)
            throw UsageError("scope without relation");
        if (vars_.size() != relation_->arity())
            throw UsageError("constraint " + relation_->name() + " has arity " + std::to_string(relation_->arity())
                    + " but " + std::to_string(vars_.size()) + " variables were given");
        for (std::size_t i = 0; i < vars_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (vars_[i] == vars_[j])
                    throw UsageError("variable repeated in constraint " + relation_->name());
    }

    auto relation() const noexcept -> const Relation & { return *relation_; }
    auto relation_ptr() const noexcept -> const std::shared_ptr<const Relation> & { return relation_; }
    auto vars() const noexcept -> const std::vector<std::size_t> & { return vars_; }
    auto var(std::size_t col) const -> std::size_t { return vars_.at(col); }
    auto arity() const noexcept -> std::size_t { return vars_.size(); }

private:
    std::shared_ptr<const Relation> relation_;
    std::vector<std::size_t> vars_;
};

struct Variable {
    std::string name;
    Domain domain;
};

/// Variables with their domains plus constraint scopes over them.
class Problem {
public:
    auto add_variable(std::string name, Domain domain) -> std::size_t
    {
        if (variable_index(name))
            throw UsageError("variable " + name + " declared twice");
        if (domain.empty())
            throw UsageError("variable " + name + " has an empty domain");
        variables_.push_back(Variable{ std::move(name), std::move(domain) });
        scopes_of_.emplace_back();
        return variables_.size() - 1;
    }

    /// Binds `relation` to the named variables. Each variable domain must be a
    /// subset of the matching column domain.
    auto add_constraint(std::shared_ptr<const Relation> relation, const std::vector<std::string> & var_names)
        -> std::size_t
    {
        std::vector<std::size_t> vars;
        for (const auto & name : var_names) {
            auto idx = variable_index(name);
            if (! idx)
                throw UsageError("undeclared variable " + name);
            vars.push_back(*idx);
        }
        return add_constraint(Scope(std::move(relation), std::move(vars)));
    }

    auto add_constraint(Scope scope) -> std::size_t
    {
        for (std::size_t col = 0; col < scope.arity(); ++col) {
            if (scope.var(col) >= variables_.size())
                throw UsageError("scope refers to unknown variable index");
            const auto & var = variables_[scope.var(col)];
            if (! var.domain.is_subset_of(scope.relation().column_domain(col)))
                throw UsageError("domain of " + var.name + " is not a subset of column " + std::to_string(col + 1)
                        + " domain of " + scope.relation().name());
        }
        auto index = constraints_.size();
        for (auto v : scope.vars())
            scopes_of_[v].push_back(index);
        constraints_.push_back(std::move(scope));
        return index;
    }

    auto variables() const noexcept -> const std::vector<Variable> & { return variables_; }
    auto variable(std::size_t i) const -> const Variable & { return variables_.at(i); }
    auto num_variables() const noexcept -> std::size_t { return variables_.size(); }
    auto constraints() const noexcept -> const std::vector<Scope> & { return constraints_; }
    auto constraint(std::size_t i) const -> const Scope & { return constraints_.at(i); }

    /// Indices of the scopes mentioning variable `var`.
    auto scopes_of(std::size_t var) const -> const std::vector<std::size_t> & { return scopes_of_.at(var); }

    auto variable_index(std::string_view name) const -> std::optional<std::size_t>
    {
        for (std::size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i].name == name)
                return i;
        return std::nullopt;
    }

    /// Same constraints over replacement domains (each a subset of the
    /// original one, in original order).
    auto with_domains(const std::vector<Domain> & domains) const -> Problem
    {
        if (domains.size() != variables_.size())
            throw UsageError("with_domains: wrong number of domains");
        Problem result;
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            if (! domains[i].is_subset_of(variables_[i].domain))
                throw UsageError("with_domains: domain of " + variables_[i].name + " grows");
            result.add_variable(variables_[i].name, domains[i]);
        }
        for (const auto & scope : constraints_)
            result.add_constraint(scope);
        return result;
    }

    /// `name(V1,V2,...)` for scope `i`.
    auto describe_scope(std::size_t i) const -> std::string
    {
        const auto & scope = constraint(i);
        std::string text = scope.relation().name() + "(";
        for (std::size_t c = 0; c < scope.arity(); ++c)
            text += (c ? "," : "") + variables_[scope.var(c)].name;
        return text + ")";
    }

private:
    std::vector<Variable> variables_;
    std::vector<Scope> constraints_;
    std::vector<std::vector<std::size_t>> scopes_of_;
};

}
