#pragma once

#include <rulegen/error.hpp>

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rulegen {

/// A symbolic value token. Values carry no numeric meaning.
using Value = std::string;

/// Position of a value inside one column domain (declaration order).
using ValueId = std::uint32_t;

/// A tuple stored as value ids, one per column.
using Row = std::vector<ValueId>;

/// Subset of a column domain, indexed by ValueId.
using ValueSet = boost::dynamic_bitset<>;

/// Token syntax shared by all file formats: nonempty, no whitespace and none
/// of the separator characters `|`, `,`, `#`, `(`, `)`.
inline auto is_valid_token(std::string_view token) -> bool
{
    if (token.empty())
        return false;
    return std::none_of(token.begin(), token.end(), [] (char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'
            || c == '|' || c == ',' || c == '#' || c == '(' || c == ')';
    });
}

/// Ordered, duplicate-free set of values.
class Domain {
public:
    Domain() = default;

    explicit Domain(std::vector<Value> values) : values_(std::move(values))
    {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (! is_valid_token(values_[i]))
                throw UsageError("invalid value token '" + values_[i] + "'");
            if (! index_.emplace(values_[i], static_cast<ValueId>(i)).second)
                throw UsageError("duplicate value '" + values_[i] + "' in domain");
        }
    }

    Domain(std::initializer_list<const char *> values) :
        Domain(std::vector<Value>(values.begin(), values.end()))
    {
    }

    auto size() const noexcept -> std::size_t { return values_.size(); }
    auto empty() const noexcept -> bool { return values_.empty(); }
    auto values() const noexcept -> const std::vector<Value> & { return values_; }
    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    auto operator[](ValueId id) const -> const Value & { return values_.at(id); }

    auto find(std::string_view token) const -> std::optional<ValueId>
    {
        auto it = index_.find(token);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    auto contains(std::string_view token) const -> bool { return find(token).has_value(); }

    auto is_subset_of(const Domain & other) const -> bool
    {
        return std::all_of(values_.begin(), values_.end(), [&] (const Value & v) { return other.contains(v); });
    }

    /// The members of `set` (a subset of this domain), in domain order.
    auto select(const ValueSet & set) const -> std::vector<Value>
    {
        std::vector<Value> result;
        for (auto i = set.find_first(); i != ValueSet::npos; i = set.find_next(i))
            result.push_back(values_.at(i));
        return result;
    }

    friend auto operator==(const Domain & a, const Domain & b) -> bool { return a.values_ == b.values_; }

private:
    std::vector<Value> values_;
    std::map<Value, ValueId, std::less<>> index_;
};

/// An extensionally defined constraint: named columns over finite domains
/// plus an explicit, duplicate-free table of allowed rows. Immutable.
class Relation {
public:
    /// Builds from value tokens; every component must belong to its column
    /// domain and rows must be distinct.
    Relation(std::string name, std::vector<Domain> column_domains,
            const std::vector<std::vector<Value>> & tuples, std::vector<std::string> column_names = { }) :
        name_(std::move(name)),
        domains_(std::move(column_domains)),
        names_(std::move(column_names))
    {
        check_shape();
        rows_.reserve(tuples.size());
        for (const auto & tuple : tuples) {
            if (tuple.size() != arity())
                throw UsageError("tuple of length " + std::to_string(tuple.size()) + " in relation '" + name_
                        + "' of arity " + std::to_string(arity()));
            Row row(arity());
            for (std::size_t c = 0; c < arity(); ++c) {
                auto id = domains_[c].find(tuple[c]);
                if (! id)
                    throw UsageError("value " + tuple[c] + " not in column " + std::to_string(c + 1) + " domain");
                row[c] = *id;
            }
            add_row(std::move(row));
        }
    }

    /// Builds from rows already encoded against `column_domains`.
    static auto from_rows(std::string name, std::vector<Domain> column_domains, std::vector<Row> rows,
            std::vector<std::string> column_names = { }) -> Relation
    {
        Relation rel;
        rel.name_ = std::move(name);
        rel.domains_ = std::move(column_domains);
        rel.names_ = std::move(column_names);
        rel.check_shape();
        rel.rows_.reserve(rows.size());
        for (auto & row : rows) {
            if (row.size() != rel.arity())
                throw UsageError("row length does not match arity of relation '" + rel.name_ + "'");
            for (std::size_t c = 0; c < rel.arity(); ++c)
                if (row[c] >= rel.domains_[c].size())
                    throw UsageError("value id out of range in column " + std::to_string(c + 1));
            rel.add_row(std::move(row));
        }
        return rel;
    }

    auto name() const noexcept -> const std::string & { return name_; }
    auto arity() const noexcept -> std::size_t { return domains_.size(); }
    auto size() const noexcept -> std::size_t { return rows_.size(); }
    auto empty() const noexcept -> bool { return rows_.empty(); }

    auto column_domains() const noexcept -> const std::vector<Domain> & { return domains_; }
    auto column_domain(std::size_t col) const -> const Domain & { return domains_.at(col); }

    /// Declared column names, or `x1..xn` when none were declared.
    auto column_name(std::size_t col) const -> std::string
    {
        if (col >= arity())
            throw UsageError("column index " + std::to_string(col) + " out of range");
        return names_.empty() ? "x" + std::to_string(col + 1) : names_[col];
    }

    auto has_column_names() const noexcept -> bool { return ! names_.empty(); }
    auto column_names() const noexcept -> const std::vector<std::string> & { return names_; }

    auto rows() const noexcept -> const std::vector<Row> & { return rows_; }
    auto row(std::size_t i) const -> const Row & { return rows_.at(i); }

    auto value(std::size_t col, ValueId id) const -> const Value & { return domains_.at(col)[id]; }

    auto tuple(std::size_t i) const -> std::vector<Value>
    {
        std::vector<Value> result;
        const auto & r = rows_.at(i);
        for (std::size_t c = 0; c < arity(); ++c)
            result.push_back(domains_[c][r[c]]);
        return result;
    }

    auto contains(const Row & row) const -> bool { return index_.contains(row); }

    /// Tuple-set equality with identical name and column domains.
    friend auto operator==(const Relation & a, const Relation & b) -> bool
    {
        return a.name_ == b.name_ && a.domains_ == b.domains_ && a.index_ == b.index_;
    }

private:
    Relation() = default;

    void check_shape() const
    {
        if (domains_.empty())
            throw UsageError("relation '" + name_ + "' must have arity >= 1");
        if (! names_.empty() && names_.size() != domains_.size())
            throw UsageError("relation '" + name_ + "' declares " + std::to_string(names_.size())
                    + " column names for arity " + std::to_string(domains_.size()));
    }

    void add_row(Row row)
    {
        if (! index_.insert(row).second) {
            std::string text;
            for (std::size_t c = 0; c < row.size(); ++c)
                text += (c ? " " : "") + domains_[c][row[c]];
            throw UsageError("duplicate tuple (" + text + ") in relation '" + name_ + "'");
        }
        rows_.push_back(std::move(row));
    }

    std::string name_;
    std::vector<Domain> domains_;
    std::vector<std::string> names_;
    std::vector<Row> rows_;
    std::set<Row> index_;
};

/// Components of `tuple` at `cols`, in the order given.
template <typename T>
auto tuple_project(std::span<const T> tuple, std::span<const std::size_t> cols) -> std::vector<T>
{
    std::vector<T> result;
    result.reserve(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] >= tuple.size())
            throw UsageError("projection index " + std::to_string(cols[i]) + " out of range for tuple of length "
                    + std::to_string(tuple.size()));
        if (std::find(cols.begin(), cols.begin() + i, cols[i]) != cols.begin() + i)
            throw UsageError("duplicate projection index " + std::to_string(cols[i]));
        result.push_back(tuple[cols[i]]);
    }
    return result;
}

template <typename T>
auto tuple_project(const std::vector<T> & tuple, const std::vector<std::size_t> & cols) -> std::vector<T>
{
    return tuple_project(std::span<const T>(tuple), std::span<const std::size_t>(cols));
}

/// The values occurring in column `col` of some tuple, as a subset of the column domain.
inline auto column_values(const Relation & rel, std::size_t col) -> ValueSet
{
    if (col >= rel.arity())
        throw UsageError("column index " + std::to_string(col) + " out of range");
    ValueSet result(rel.column_domain(col).size());
    for (const auto & row : rel.rows())
        result.set(row[col]);
    return result;
}

/// Reindexes columns so that `(a_1..a_n)` is in the result iff
/// `(a_pi(1)..a_pi(n))` is in `rel`: old column i becomes column pi[i].
inline auto permute(const Relation & rel, std::span<const std::size_t> pi) -> Relation
{
    const auto n = rel.arity();
    if (pi.size() != n)
        throw UsageError("permutation length " + std::to_string(pi.size()) + " does not match arity "
                + std::to_string(n));
    std::vector<bool> hit(n, false);
    for (auto p : pi) {
        if (p >= n || hit[p])
            throw UsageError("not a permutation of the column indices");
        hit[p] = true;
    }

    std::vector<Domain> domains(n);
    std::vector<std::string> names(rel.has_column_names() ? n : 0);
    for (std::size_t i = 0; i < n; ++i) {
        domains[pi[i]] = rel.column_domain(i);
        if (rel.has_column_names())
            names[pi[i]] = rel.column_names()[i];
    }

    std::vector<Row> rows;
    rows.reserve(rel.size());
    for (const auto & row : rel.rows()) {
        Row moved(n);
        for (std::size_t i = 0; i < n; ++i)
            moved[pi[i]] = row[i];
        rows.push_back(std::move(moved));
    }
    return Relation::from_rows(rel.name(), std::move(domains), std::move(rows), std::move(names));
}

inline auto permute(const Relation & rel, const std::vector<std::size_t> & pi) -> Relation
{
    return permute(rel, std::span<const std::size_t>(pi));
}

/// `rel` intersected with the product of `doms`; the result is defined over `doms`.
inline auto restrict(const Relation & rel, std::span<const Domain> doms) -> Relation
{
    if (doms.size() != rel.arity())
        throw UsageError("restriction needs " + std::to_string(rel.arity()) + " domains, got "
                + std::to_string(doms.size()));
    for (std::size_t c = 0; c < doms.size(); ++c)
        if (! doms[c].is_subset_of(rel.column_domain(c)))
            throw UsageError("domain for column " + std::to_string(c + 1) + " is not a subset of the column domain");

    // old id -> new id, per column
    std::vector<std::vector<std::optional<ValueId>>> recode(rel.arity());
    for (std::size_t c = 0; c < rel.arity(); ++c) {
        const auto & old_domain = rel.column_domain(c);
        recode[c].resize(old_domain.size());
        for (ValueId v = 0; v < old_domain.size(); ++v)
            recode[c][v] = doms[c].find(old_domain[v]);
    }

    std::vector<Row> rows;
    for (const auto & row : rel.rows()) {
        Row kept(rel.arity());
        bool inside = true;
        for (std::size_t c = 0; c < rel.arity() && inside; ++c) {
            if (auto id = recode[c][row[c]])
                kept[c] = *id;
            else
                inside = false;
        }
        if (inside)
            rows.push_back(std::move(kept));
    }
    return Relation::from_rows(rel.name(), std::vector<Domain>(doms.begin(), doms.end()), std::move(rows),
            rel.column_names());
}

inline auto restrict(const Relation & rel, const std::vector<Domain> & doms) -> Relation
{
    return restrict(rel, std::span<const Domain>(doms));
}

/// True iff every column domain of `c` is inside the one of `e` and `c`
/// holds exactly the tuples of `e` that lie in its own domains.
inline auto is_based_on(const Relation & c, const Relation & e) -> bool
{
    if (c.arity() != e.arity())
        throw UsageError("is_based_on: arity mismatch (" + std::to_string(c.arity()) + " vs "
                + std::to_string(e.arity()) + ")");
    for (std::size_t i = 0; i < c.arity(); ++i)
        if (! c.column_domain(i).is_subset_of(e.column_domain(i)))
            return false;

    auto restricted = restrict(e, c.column_domains());
    if (restricted.size() != c.size())
        return false;
    return std::all_of(restricted.rows().begin(), restricted.rows().end(),
            [&] (const Row & row) { return c.contains(row); });
}

}
