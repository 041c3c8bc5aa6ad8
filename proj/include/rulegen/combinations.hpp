#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace rulegen {

/// Advances `comb` (strictly increasing indices into [0, n)) to the next
/// k-combination in lexicographic order. Returns false after the last one.
inline auto next_combination(std::vector<std::size_t> & comb, std::size_t n) -> bool
{
    const auto k = comb.size();
    for (std::size_t i = k; i-- > 0;) {
        if (comb[i] < n - k + i) {
            ++comb[i];
            for (std::size_t j = i + 1; j < k; ++j)
                comb[j] = comb[j - 1] + 1;
            return true;
        }
    }
    return false;
}

inline auto first_combination(std::size_t k) -> std::vector<std::size_t>
{
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), std::size_t{ 0 });
    return comb;
}

/// Calls `fn(cols)` for every k-subset of [0, n) in lexicographic order.
template <typename Fn>
void for_each_combination(std::size_t n, std::size_t k, Fn && fn)
{
    if (k > n)
        return;
    auto comb = first_combination(k);
    do {
        fn(static_cast<const std::vector<std::size_t> &>(comb));
    } while (next_combination(comb, n));
}

}
