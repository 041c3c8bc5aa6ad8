#pragma once

// Plain-text rule format, one rule (or merged rule group) per line:
//
//   x=0 -> z!=1
//   z=1 -> x!=0, y!=0
//   true -> x!=l
//   x in {+,-}, y=l -> z!=l
//
// Columns are named by the relation's declared column names, or x1..xn.

#include <rulegen/inclusion.hpp>
#include <rulegen/rules.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace rulegen {

namespace detail {
    inline auto render_conclusions(const Relation & rel, const std::vector<Literal> & conclusions) -> std::string
    {
        std::string text;
        for (std::size_t i = 0; i < conclusions.size(); ++i)
            text += (i ? ", " : "") + rel.column_name(conclusions[i].column)
                + "!=" + rel.value(conclusions[i].column, conclusions[i].value);
        return text;
    }

    inline auto render_set(const Relation & rel, std::size_t col, const ValueSet & set) -> std::string
    {
        std::string text = "{";
        bool first = true;
        for (const auto & v : rel.column_domain(col).select(set)) {
            text += (first ? "" : ",") + v;
            first = false;
        }
        return text + "}";
    }

    inline auto trim(std::string_view s) -> std::string_view
    {
        auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string_view::npos)
            return { };
        auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    /// Splits on commas that are not inside braces.
    inline auto split_items(std::string_view s) -> std::vector<std::string_view>
    {
        std::vector<std::string_view> items;
        std::size_t depth = 0, start = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '{')
                ++depth;
            else if (s[i] == '}' && depth > 0)
                --depth;
            else if (s[i] == ',' && depth == 0) {
                items.push_back(trim(s.substr(start, i - start)));
                start = i + 1;
            }
        }
        items.push_back(trim(s.substr(start)));
        return items;
    }

    inline auto column_by_name(const Relation & rel, std::string_view name, std::size_t line) -> std::size_t
    {
        for (std::size_t c = 0; c < rel.arity(); ++c)
            if (rel.column_name(c) == name)
                return c;
        throw ParseError(line, "unknown column '" + std::string(name) + "' for relation " + rel.name());
    }

    inline auto value_in(const Relation & rel, std::size_t col, std::string_view token, std::size_t line) -> ValueId
    {
        auto id = rel.column_domain(col).find(token);
        if (! id)
            throw ParseError(line, "value " + std::string(token) + " not in domain of column " + rel.column_name(col));
        return *id;
    }

    struct ParsedLine {
        std::vector<SetLiteral> premise;
        std::vector<Literal> conclusions;
    };

    inline auto parse_line(const Relation & rel, std::string_view text, std::size_t line) -> ParsedLine
    {
        auto arrow = text.find("->");
        if (arrow == std::string_view::npos)
            throw ParseError(line, "expected '->'");
        auto lhs = trim(text.substr(0, arrow));
        auto rhs = trim(text.substr(arrow + 2));

        ParsedLine parsed;
        if (lhs != "true") {
            for (auto item : split_items(lhs)) {
                auto brace = item.find('{');
                if (brace != std::string_view::npos) {
                    auto head = trim(item.substr(0, brace));
                    if (head.size() < 3 || head.substr(head.size() - 2) != "in")
                        throw ParseError(line, "expected 'column in {...}'");
                    auto col = column_by_name(rel, trim(head.substr(0, head.size() - 2)), line);
                    auto close = item.rfind('}');
                    if (close == std::string_view::npos || close < brace)
                        throw ParseError(line, "unterminated value set");
                    ValueSet set(rel.column_domain(col).size());
                    auto body = item.substr(brace + 1, close - brace - 1);
                    for (auto v : split_items(body))
                        set.set(value_in(rel, col, v, line));
                    parsed.premise.push_back(SetLiteral{ col, std::move(set) });
                }
                else {
                    auto eq = item.find('=');
                    if (eq == std::string_view::npos)
                        throw ParseError(line, "expected 'column=value' in premise");
                    auto col = column_by_name(rel, trim(item.substr(0, eq)), line);
                    ValueSet set(rel.column_domain(col).size());
                    set.set(value_in(rel, col, trim(item.substr(eq + 1)), line));
                    parsed.premise.push_back(SetLiteral{ col, std::move(set) });
                }
            }
        }
        std::sort(parsed.premise.begin(), parsed.premise.end());

        for (auto item : split_items(rhs)) {
            auto ne = item.find("!=");
            if (ne == std::string_view::npos)
                throw ParseError(line, "expected 'column!=value' in conclusion");
            auto col = column_by_name(rel, trim(item.substr(0, ne)), line);
            parsed.conclusions.push_back(Literal{ col, value_in(rel, col, trim(item.substr(ne + 2)), line) });
        }
        return parsed;
    }

    template <typename Fn>
    void for_each_rule_line(std::string_view text, Fn && fn)
    {
        std::size_t line = 0;
        std::istringstream in{ std::string(text) };
        for (std::string raw; std::getline(in, raw);) {
            ++line;
            auto body = trim(std::string_view(raw).substr(0, raw.find('#')));
            if (! body.empty())
                fn(body, line);
        }
    }
}

inline auto render_premise(const Relation & rel, const std::vector<Literal> & premise) -> std::string
{
    if (premise.empty())
        return "true";
    std::string text;
    for (std::size_t i = 0; i < premise.size(); ++i)
        text += (i ? ", " : "") + rel.column_name(premise[i].column) + "=" + rel.value(premise[i].column, premise[i].value);
    return text;
}

inline auto render_premise(const Relation & rel, const std::vector<SetLiteral> & premise) -> std::string
{
    if (premise.empty())
        return "true";
    std::string text;
    for (std::size_t i = 0; i < premise.size(); ++i) {
        const auto & lit = premise[i];
        text += i ? ", " : "";
        if (lit.values.count() == 1)
            text += rel.column_name(lit.column) + "=" + rel.value(lit.column, static_cast<ValueId>(lit.values.find_first()));
        else
            text += rel.column_name(lit.column) + " in " + detail::render_set(rel, lit.column, lit.values);
    }
    return text;
}

inline auto render_rule(const Relation & rel, const Rule & r) -> std::string
{
    return render_premise(rel, r.premise) + " -> "
        + detail::render_conclusions(rel, { Literal{ r.conclusion_column, r.conclusion_value } });
}

inline auto render_rule(const Relation & rel, const InclusionRule & r) -> std::string
{
    return render_premise(rel, r.premise) + " -> "
        + detail::render_conclusions(rel, { Literal{ r.conclusion_column, r.conclusion_value } });
}

inline auto render_group(const Relation & rel, const RuleGroup & g) -> std::string
{
    return render_premise(rel, g.premise) + " -> " + detail::render_conclusions(rel, g.conclusions);
}

inline auto render_group(const Relation & rel, const InclusionRuleGroup & g) -> std::string
{
    return render_premise(rel, g.premise) + " -> " + detail::render_conclusions(rel, g.conclusions);
}

/// Reads membership rules (one rule or merged group per line, `#` comments).
inline auto parse_native_rules(const Relation & rel, std::string_view text) -> RuleSet
{
    RuleSet rules;
    detail::for_each_rule_line(text, [&] (std::string_view body, std::size_t line) {
        auto parsed = detail::parse_line(rel, body, line);
        std::vector<Literal> premise;
        for (const auto & lit : parsed.premise) {
            if (lit.values.count() != 1)
                throw ParseError(line, "membership rule premise must use column=value");
            premise.push_back(Literal{ lit.column, static_cast<ValueId>(lit.values.find_first()) });
        }
        for (const auto & c : parsed.conclusions) {
            Rule r{ premise, c.column, c.value };
            try {
                check_rule(rel, r);
            }
            catch (const UsageError & e) {
                throw ParseError(line, e.what());
            }
            rules.push_back(std::move(r));
        }
    });
    return rules;
}

/// Reads inclusion rules; `x=v` is read as the singleton set `x in {v}`.
inline auto parse_native_inclusion_rules(const Relation & rel, std::string_view text) -> InclusionRuleSet
{
    InclusionRuleSet rules;
    detail::for_each_rule_line(text, [&] (std::string_view body, std::size_t line) {
        auto parsed = detail::parse_line(rel, body, line);
        for (const auto & c : parsed.conclusions) {
            InclusionRule r{ parsed.premise, c.column, c.value };
            try {
                check_inclusion_rule(rel, r);
            }
            catch (const UsageError & e) {
                throw ParseError(line, e.what());
            }
            rules.push_back(std::move(r));
        }
    });
    return rules;
}

}
