#pragma once

// CHR propagation-rule rendering. A merged group becomes one line
//
//   name(c1,V,...) ==> in(V,[a, b]) | W##d,W##e.
//
// where premise columns with a single value appear as constants in the head,
// larger premise sets become `in/2` guards and conclusions become `##`
// disequalities.

#include <rulegen/inclusion.hpp>
#include <rulegen/rules.hpp>

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace rulegen {

/// How free head arguments are named.
struct ChrStyle {
    enum class Naming {
        by_column,   ///< names[col], default A, B, C, ... by column index
        sequential,  ///< free positions take names[0], names[1], ... left to right
    };

    Naming naming = Naming::by_column;
    std::vector<std::string> names;
};

/// True for tokens that are plain Prolog atoms or integers: `[a-z0-9][a-zA-Z0-9_]*`.
inline auto is_bare_token(std::string_view token) -> bool
{
    if (token.empty())
        return false;
    auto first = token.front();
    if (! ((first >= 'a' && first <= 'z') || (first >= '0' && first <= '9')))
        return false;
    return std::all_of(token.begin() + 1, token.end(), [] (char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    });
}

namespace detail {
    inline auto is_integer_token(std::string_view token) -> bool
    {
        return ! token.empty() && std::all_of(token.begin(), token.end(), [] (char c) { return c >= '0' && c <= '9'; });
    }

    inline auto quoted(std::string_view token) -> std::string
    {
        std::string text = "'";
        for (char c : token)
            text += (c == '\'') ? std::string("''") : std::string(1, c);
        return text + "'";
    }

    /// Renders values for one relation. When any value of the relation needs
    /// quotes, every non-integer value is quoted so the vocabulary is uniform.
    class ValuePrinter {
    public:
        explicit ValuePrinter(const Relation & rel) : rel_(rel)
        {
            for (const auto & d : rel.column_domains())
                for (const auto & v : d)
                    if (! is_bare_token(v))
                        quote_all_ = true;
        }

        auto operator()(std::size_t col, ValueId id) const -> std::string
        {
            const auto & v = rel_.value(col, id);
            if (! is_bare_token(v) || (quote_all_ && ! is_integer_token(v)))
                return quoted(v);
            return v;
        }

    private:
        const Relation & rel_;
        bool quote_all_ = false;
    };

    /// Head argument text per column; `constants` holds the head constants
    /// (empty string for free columns).
    inline auto head_arguments(const Relation & rel, const std::vector<std::string> & constants, const ChrStyle & style)
        -> std::vector<std::string>
    {
        const auto n = rel.arity();
        std::vector<std::string> args(n);
        std::size_t next = 0;
        for (std::size_t col = 0; col < n; ++col) {
            if (! constants[col].empty()) {
                args[col] = constants[col];
                continue;
            }
            if (style.naming == ChrStyle::Naming::sequential) {
                if (next >= style.names.size())
                    throw UsageError("CHR variable name pool exhausted for relation " + rel.name());
                args[col] = style.names[next++];
            }
            else if (! style.names.empty()) {
                if (style.names.size() != n)
                    throw UsageError("CHR variable names do not match arity of " + rel.name());
                args[col] = style.names[col];
            }
            else {
                if (n > 26)
                    throw UsageError("relation " + rel.name() + " has arity > 26; explicit CHR variable names needed");
                args[col] = std::string(1, static_cast<char>('A' + col));
            }
        }
        return args;
    }

    inline auto functor(const Relation & rel) -> std::string
    {
        return is_bare_token(rel.name()) && ! is_integer_token(rel.name()) ? rel.name() : quoted(rel.name());
    }

    inline auto head(const Relation & rel, const std::vector<std::string> & args) -> std::string
    {
        std::string text = functor(rel) + "(";
        for (std::size_t i = 0; i < args.size(); ++i)
            text += (i ? "," : "") + args[i];
        return text + ")";
    }

    inline auto body(const std::vector<Literal> & conclusions, const std::vector<std::string> & args,
            const ValuePrinter & print) -> std::string
    {
        std::string text;
        for (std::size_t i = 0; i < conclusions.size(); ++i)
            text += (i ? "," : "") + args[conclusions[i].column] + "##" + print(conclusions[i].column, conclusions[i].value);
        return text;
    }
}

/// One CHR line per merged membership group.
inline auto emit_chr_membership(const Relation & rel, const std::vector<RuleGroup> & groups, const ChrStyle & style = { })
    -> std::string
{
    detail::ValuePrinter print(rel);
    std::string out;
    for (const auto & g : groups) {
        std::vector<std::string> constants(rel.arity());
        for (const auto & lit : g.premise)
            constants[lit.column] = print(lit.column, lit.value);
        auto args = detail::head_arguments(rel, constants, style);
        out += detail::head(rel, args) + " ==> " + detail::body(g.conclusions, args, print) + ".\n";
    }
    return out;
}

/// One CHR line per merged inclusion group; non-singleton premise sets
/// become `in/2` guards. The `in/2` definition leads the output as a comment.
inline auto emit_chr_inclusion(const Relation & rel, const std::vector<InclusionRuleGroup> & groups,
        const ChrStyle & style = { }) -> std::string
{
    if (groups.empty())
        return { };
    detail::ValuePrinter print(rel);
    std::string out = "% in(X,L):- dom(X,D), subset(D,L).\n";
    for (const auto & g : groups) {
        std::vector<std::string> constants(rel.arity());
        for (const auto & lit : g.premise)
            if (lit.values.count() == 1)
                constants[lit.column] = print(lit.column, static_cast<ValueId>(lit.values.find_first()));
        auto args = detail::head_arguments(rel, constants, style);

        std::string guards;
        for (const auto & lit : g.premise) {
            if (lit.values.count() == 1)
                continue;
            std::string list;
            for (auto v = lit.values.find_first(); v != ValueSet::npos; v = lit.values.find_next(v))
                list += (list.empty() ? "" : ", ") + print(lit.column, static_cast<ValueId>(v));
            guards += (guards.empty() ? "" : ",") + std::string("in(") + args[lit.column] + ",[" + list + "])";
        }

        out += detail::head(rel, args) + " ==> " + (guards.empty() ? "" : guards + " | ")
            + detail::body(g.conclusions, args, print) + ".\n";
    }
    return out;
}

}
