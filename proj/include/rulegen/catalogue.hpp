#pragma once

// Built-in relations: Boolean gates, Kleene equivalence, the Waltz fork, T
// and line tables, the small base relation c, and the full adder derived from
// its gate network.

#include <rulegen/chr.hpp>
#include <rulegen/search.hpp>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace rulegen {

namespace detail {
    inline auto boolean_gate(const std::string & name, bool (*op)(bool, bool)) -> Relation
    {
        std::vector<std::vector<Value>> tuples;
        for (int x = 0; x <= 1; ++x)
            for (int y = 0; y <= 1; ++y)
                tuples.push_back({ std::to_string(x), std::to_string(y), std::to_string(op(x, y) ? 1 : 0) });
        Domain bit{ "0", "1" };
        return Relation(name, { bit, bit, bit }, tuples, { "x", "y", "z" });
    }

    /// Waltz labels in the order used by the catalogue: l r - +.
    inline auto waltz_domain() -> Domain { return Domain{ "l", "r", "-", "+" }; }

    inline auto build_full_adder() -> Relation
    {
        auto and_rel = std::make_shared<const Relation>(boolean_gate("and", [] (bool a, bool b) { return a && b; }));
        auto or_rel = std::make_shared<const Relation>(boolean_gate("or", [] (bool a, bool b) { return a || b; }));
        auto xor_rel = std::make_shared<const Relation>(boolean_gate("xor", [] (bool a, bool b) { return a != b; }));

        Problem net;
        for (const auto * v : { "I1", "I2", "I3", "O1", "O2", "X1", "A1", "A2" })
            net.add_variable(v, Domain{ "0", "1" });
        net.add_constraint(xor_rel, { "I1", "I2", "X1" });
        net.add_constraint(and_rel, { "I1", "I2", "A1" });
        net.add_constraint(xor_rel, { "X1", "I3", "O2" });
        net.add_constraint(and_rel, { "I3", "X1", "A2" });
        net.add_constraint(or_rel, { "A1", "A2", "O1" });

        std::vector<std::vector<Value>> tuples;
        for (const auto & s : brute_force_solutions(net))
            tuples.emplace_back(s.values.begin(), s.values.begin() + 5);
        Domain bit{ "0", "1" };
        return Relation("full_adder", { bit, bit, bit, bit, bit }, tuples, { "i1", "i2", "i3", "o1", "o2" });
    }

    struct CatalogueEntry {
        std::string_view key;
        std::string_view relation_name;
        Relation (*make)();
    };

    inline const CatalogueEntry catalogue[] = {
        { "and", "and", [] { return boolean_gate("and", [] (bool a, bool b) { return a && b; }); } },
        { "or", "or", [] { return boolean_gate("or", [] (bool a, bool b) { return a || b; }); } },
        { "xor", "xor", [] { return boolean_gate("xor", [] (bool a, bool b) { return a != b; }); } },
        { "kleene-equiv", "equiv", [] {
            Domain k{ "t", "f", "u" };
            return Relation("equiv", { k, k, k },
                    { { "t", "t", "t" }, { "t", "f", "f" }, { "t", "u", "u" },
                      { "f", "t", "f" }, { "f", "f", "t" }, { "f", "u", "u" },
                      { "u", "t", "u" }, { "u", "f", "u" }, { "u", "u", "u" } },
                    { "x", "y", "z" });
        } },
        { "fork", "fork", [] {
            auto w = waltz_domain();
            return Relation("fork", { w, w, w },
                    { { "+", "+", "+" }, { "-", "-", "-" }, { "l", "r", "-" }, { "-", "l", "r" }, { "r", "-", "l" } },
                    { "x", "y", "z" });
        } },
        { "t", "t", [] {
            auto w = waltz_domain();
            return Relation("t", { w, w, w },
                    { { "r", "l", "+" }, { "r", "l", "-" }, { "r", "l", "r" }, { "r", "l", "l" } },
                    { "x", "y", "z" });
        } },
        { "line", "line", [] {
            auto w = waltz_domain();
            return Relation("line", { w, w }, { { "+", "+" }, { "-", "-" }, { "l", "r" }, { "r", "l" } }, { "x", "y" });
        } },
        { "base-c", "c", [] {
            Domain d{ "0", "1", "2" };
            return Relation("c", { d, d }, { { "0", "1" }, { "1", "0" }, { "2", "2" } }, { "x", "y" });
        } },
        { "full-adder", "full_adder", build_full_adder },
    };

    inline auto find_entry(std::string_view name) -> const CatalogueEntry *
    {
        for (const auto & e : catalogue)
            if (e.key == name || e.relation_name == name)
                return &e;
        return nullptr;
    }
}

/// Catalogue keys, in catalogue order.
inline auto builtin_names() -> std::vector<std::string>
{
    std::vector<std::string> names;
    for (const auto & e : detail::catalogue)
        names.emplace_back(e.key);
    return names;
}

inline auto is_builtin(std::string_view name) -> bool { return detail::find_entry(name) != nullptr; }

/// Looks up by catalogue key (`kleene-equiv`) or relation name (`equiv`).
inline auto builtin(std::string_view name) -> Relation
{
    const auto * e = detail::find_entry(name);
    if (! e)
        throw UsageError("unknown builtin relation '" + std::string(name) + "'");
    return e->make();
}

/// Built-ins are emitted with free head arguments named X, Y, Z, U, V, W
/// left to right.
inline auto builtin_chr_style() -> ChrStyle
{
    return ChrStyle{ ChrStyle::Naming::sequential, { "X", "Y", "Z", "U", "V", "W" } };
}

}
