#pragma once

#include <cstddef>
#include <utility>

namespace cqnls {

// Pairwise (cascade) summation of term(0) + ... + term(n-1).
// The split points depend only on n, so the result is bit-reproducible.
template <typename T, typename Term>
T pairwise_sum(std::size_t begin, std::size_t end, Term&& term) {
    constexpr std::size_t block = 64;
    if (end - begin <= block) {
        T acc{};
        for (std::size_t i = begin; i < end; ++i) acc += term(i);
        return acc;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum<T>(begin, mid, term) + pairwise_sum<T>(mid, end, term);
}

template <typename T, typename Term>
T pairwise_sum(std::size_t n, Term&& term) {
    return pairwise_sum<T>(std::size_t{0}, n, std::forward<Term>(term));
}

}  // namespace cqnls
