#pragma once

// Text loaders for relation files and problem files.
//
//   relation and 3
//   columns: x y z          (optional)
//   domains: 0 1 | 0 1 | 0 1
//   tuples:
//   0 0 0
//   ...
//
//   csp
//   use gates.rel
//   var I1 in 1
//   constraint xor(I1, I2, X1)

#include <rulegen/catalogue.hpp>
#include <rulegen/native_format.hpp>
#include <rulegen/problem.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace rulegen {

namespace detail {
    inline auto tokens(std::string_view s) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::istringstream in{ std::string(s) };
        for (std::string t; in >> t;)
            out.push_back(std::move(t));
        return out;
    }

    inline auto strip_comment(std::string_view s) -> std::string_view
    {
        return trim(s.substr(0, s.find('#')));
    }

    inline auto starts_with_keyword(std::string_view line, std::string_view keyword) -> bool
    {
        return line.starts_with(keyword)
            && (line.size() == keyword.size() || line[keyword.size()] == ' ' || line[keyword.size()] == '\t'
                || keyword.back() == ':');
    }

    inline auto read_file(const std::filesystem::path & path) -> std::string
    {
        std::ifstream in(path, std::ios::binary);
        if (! in)
            throw UsageError("cannot open " + path.string());
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    }

    struct PendingRelation {
        std::size_t line = 0;
        std::string name;
        std::size_t arity = 0;
        std::vector<std::string> columns;
        std::optional<std::vector<Domain>> domains;
        bool in_tuples = false;
        std::vector<std::pair<std::size_t, std::vector<Value>>> tuples;
    };

    inline auto finish_relation(PendingRelation & p, std::vector<std::string> * warnings) -> Relation
    {
        if (! p.domains)
            throw ParseError(p.line, "relation " + p.name + " has no 'domains:' line");
        std::vector<Row> rows;
        std::set<Row> seen;
        for (const auto & [line, tuple] : p.tuples) {
            if (tuple.size() != p.arity)
                throw ParseError(line, "tuple has " + std::to_string(tuple.size()) + " values, relation " + p.name
                        + " has arity " + std::to_string(p.arity));
            Row row(p.arity);
            for (std::size_t c = 0; c < p.arity; ++c) {
                auto id = (*p.domains)[c].find(tuple[c]);
                if (! id)
                    throw ParseError(line, "value " + tuple[c] + " not in column " + std::to_string(c + 1) + " domain");
                row[c] = *id;
            }
            if (! seen.insert(row).second)
                throw ParseError(line, "duplicate tuple in relation " + p.name);
            rows.push_back(std::move(row));
        }
        if (rows.empty() && warnings)
            warnings->push_back("relation " + p.name + " is empty; it yields no rules");
        try {
            return Relation::from_rows(p.name, std::move(*p.domains), std::move(rows), p.columns);
        }
        catch (const UsageError & e) {
            throw ParseError(p.line, e.what());
        }
    }
}

/// Every relation in a relation file, in file order.
inline auto parse_relations(std::string_view text, std::vector<std::string> * warnings = nullptr) -> std::vector<Relation>
{
    std::vector<Relation> result;
    std::optional<detail::PendingRelation> pending;

    std::istringstream in{ std::string(text) };
    std::size_t line = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line;
        auto body = detail::strip_comment(raw);
        if (body.empty())
            continue;

        if (detail::starts_with_keyword(body, "relation")) {
            if (pending)
                result.push_back(detail::finish_relation(*pending, warnings));
            auto t = detail::tokens(body);
            if (t.size() != 3)
                throw ParseError(line, "expected 'relation NAME ARITY'");
            std::size_t arity = 0;
            try {
                std::size_t used = 0;
                arity = std::stoul(t[2], &used);
                if (used != t[2].size())
                    throw std::invalid_argument(t[2]);
            }
            catch (const std::logic_error &) {
                throw ParseError(line, "arity must be a positive integer, got '" + t[2] + "'");
            }
            if (arity == 0)
                throw ParseError(line, "arity must be a positive integer, got '" + t[2] + "'");
            if (! is_valid_token(t[1]))
                throw ParseError(line, "invalid relation name '" + t[1] + "'");
            pending = detail::PendingRelation{ line, t[1], arity, { }, std::nullopt, false, { } };
            continue;
        }

        if (! pending)
            throw ParseError(line, "expected 'relation NAME ARITY'");

        if (! pending->in_tuples && detail::starts_with_keyword(body, "columns:")) {
            auto names = detail::tokens(body.substr(8));
            if (names.size() != pending->arity)
                throw ParseError(line, "columns: expected " + std::to_string(pending->arity) + " names");
            pending->columns = std::move(names);
        }
        else if (! pending->in_tuples && detail::starts_with_keyword(body, "domains:")) {
            std::vector<Domain> doms;
            std::string_view rest = body.substr(8);
            while (true) {
                auto bar = rest.find('|');
                auto part = rest.substr(0, bar);
                try {
                    doms.emplace_back(detail::tokens(part));
                }
                catch (const UsageError & e) {
                    throw ParseError(line, e.what());
                }
                if (bar == std::string_view::npos)
                    break;
                rest = rest.substr(bar + 1);
            }
            if (doms.size() != pending->arity)
                throw ParseError(line, "domains: expected " + std::to_string(pending->arity) + " column domains, got "
                        + std::to_string(doms.size()));
            for (std::size_t c = 0; c < doms.size(); ++c)
                if (doms[c].empty())
                    throw ParseError(line, "column " + std::to_string(c + 1) + " domain is empty");
            pending->domains = std::move(doms);
        }
        else if (! pending->in_tuples && detail::starts_with_keyword(body, "tuples:")) {
            if (! pending->domains)
                throw ParseError(line, "'tuples:' before 'domains:'");
            pending->in_tuples = true;
            if (! detail::trim(body.substr(7)).empty())
                throw ParseError(line, "tuples start on the line after 'tuples:'");
        }
        else if (pending->in_tuples) {
            pending->tuples.emplace_back(line, detail::tokens(body));
        }
        else
            throw ParseError(line, "unexpected line in relation " + pending->name);
    }
    if (pending)
        result.push_back(detail::finish_relation(*pending, warnings));
    return result;
}

/// Exactly one relation, or the one called `name` when given.
inline auto parse_relation(std::string_view text, std::optional<std::string_view> name = std::nullopt,
        std::vector<std::string> * warnings = nullptr) -> Relation
{
    auto all = parse_relations(text, warnings);
    if (name) {
        for (auto & r : all)
            if (r.name() == *name)
                return std::move(r);
        throw UsageError("no relation named '" + std::string(*name) + "'");
    }
    if (all.size() != 1)
        throw UsageError("expected exactly one relation, found " + std::to_string(all.size()) + "; use --relation");
    return std::move(all.front());
}

inline auto load_relations(const std::filesystem::path & path, std::vector<std::string> * warnings = nullptr)
    -> std::vector<Relation>
{
    try {
        return parse_relations(detail::read_file(path), warnings);
    }
    catch (const ParseError & e) {
        throw ParseError(e.line(), path.string() + ": " + e.message());
    }
}

/// Parses a problem file. `use` paths are relative to `base_dir`; constraint
/// names resolve against the used relations first, then the built-ins.
inline auto parse_problem(std::string_view text, const std::filesystem::path & base_dir = { },
        std::vector<std::string> * warnings = nullptr) -> Problem
{
    Problem problem;
    std::map<std::string, std::shared_ptr<const Relation>, std::less<>> relations;
    std::map<std::string, std::shared_ptr<const Relation>, std::less<>> builtins;
    bool header = false;

    std::istringstream in{ std::string(text) };
    std::size_t line = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++line;
        auto body = detail::strip_comment(raw);
        if (body.empty())
            continue;
        if (! header) {
            if (body != "csp")
                throw ParseError(line, "problem files start with 'csp'");
            header = true;
            continue;
        }

        try {
            if (detail::starts_with_keyword(body, "use")) {
                auto t = detail::tokens(body);
                if (t.size() != 2)
                    throw ParseError(line, "expected 'use FILE'");
                for (auto & r : load_relations(base_dir / t[1], warnings)) {
                    auto name = r.name();
                    if (relations.contains(name))
                        throw ParseError(line, "relation " + name + " defined twice");
                    relations.emplace(name, std::make_shared<const Relation>(std::move(r)));
                }
            }
            else if (detail::starts_with_keyword(body, "var")) {
                auto t = detail::tokens(body);
                if (t.size() < 4 || t[2] != "in")
                    throw ParseError(line, "expected 'var NAME in v1 v2 ...'");
                if (! is_valid_token(t[1]))
                    throw ParseError(line, "invalid variable name '" + t[1] + "'");
                problem.add_variable(t[1], Domain(std::vector<Value>(t.begin() + 3, t.end())));
            }
            else if (detail::starts_with_keyword(body, "constraint")) {
                auto rest = detail::trim(body.substr(10));
                auto open = rest.find('(');
                auto close = rest.rfind(')');
                if (open == std::string_view::npos || close == std::string_view::npos || close < open
                        || ! detail::trim(rest.substr(close + 1)).empty())
                    throw ParseError(line, "expected 'constraint name(V1, ..., Vn)'");
                auto name = std::string(detail::trim(rest.substr(0, open)));
                std::vector<std::string> vars;
                for (auto v : detail::split_items(rest.substr(open + 1, close - open - 1)))
                    vars.emplace_back(v);

                std::shared_ptr<const Relation> rel;
                if (auto it = relations.find(name); it != relations.end())
                    rel = it->second;
                else if (auto jt = builtins.find(name); jt != builtins.end())
                    rel = jt->second;
                else if (is_builtin(name))
                    rel = builtins[name] = std::make_shared<const Relation>(builtin(name));
                else
                    throw ParseError(line, "unknown relation '" + name + "'");

                if (vars.size() != rel->arity())
                    throw ParseError(line, "constraint " + name + " has " + std::to_string(vars.size())
                            + " arguments, relation arity is " + std::to_string(rel->arity()));
                auto index = problem.add_constraint(rel, vars);

                if (warnings) {
                    const auto & scope = problem.constraint(index);
                    for (std::size_t col = 0; col < scope.arity(); ++col) {
                        auto present = column_values(*rel, col);
                        for (const auto & v : problem.variable(scope.var(col)).domain)
                            if (! present.test(*rel->column_domain(col).find(v)))
                                warnings->push_back("line " + std::to_string(line) + ": value " + v + " of "
                                        + problem.variable(scope.var(col)).name + " never occurs in column "
                                        + std::to_string(col + 1) + " of " + rel->name());
                    }
                }
            }
            else
                throw ParseError(line, "unexpected line '" + std::string(body) + "'");
        }
        catch (const UsageError & e) {
            throw ParseError(line, e.what());
        }
    }
    if (! header)
        throw ParseError(line, "empty problem file");
    return problem;
}

inline auto load_problem(const std::filesystem::path & path, std::vector<std::string> * warnings = nullptr) -> Problem
{
    try {
        return parse_problem(detail::read_file(path), path.parent_path(), warnings);
    }
    catch (const ParseError & e) {
        throw ParseError(e.line(), path.string() + ": " + e.message());
    }
}

}
