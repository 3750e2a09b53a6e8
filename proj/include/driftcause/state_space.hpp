#ifndef DRIFTCAUSE_STATE_SPACE_HPP
#define DRIFTCAUSE_STATE_SPACE_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace driftcause {

// Mixed-radix indexing shared by joint tables, CPT rows and contingency
// strata. Component 0 is the most significant digit; the last component
// varies fastest, so enumeration order is lexicographic.

inline std::vector<std::size_t> mixed_radix_strides(std::span<const int> cards) {
    std::vector<std::size_t> strides(cards.size(), 1);
    for (std::size_t i = cards.size(); i-- > 1;) {
        strides[i - 1] = strides[i] * static_cast<std::size_t>(cards[i]);
    }
    return strides;
}

inline std::size_t mixed_radix_index(std::span<const int> assignment,
                                     std::span<const std::size_t> strides) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        idx += static_cast<std::size_t>(assignment[i]) * strides[i];
    }
    return idx;
}

inline void mixed_radix_decode(std::size_t index, std::span<const int> cards,
                               std::span<int> out) {
    for (std::size_t i = cards.size(); i-- > 0;) {
        out[i] = static_cast<int>(index % static_cast<std::size_t>(cards[i]));
        index /= static_cast<std::size_t>(cards[i]);
    }
}

/// Product of cardinalities, saturating at SIZE_MAX on overflow.
inline std::size_t state_space_size(std::span<const int> cards) {
    std::size_t total = 1;
    for (int c : cards) {
        if (c <= 0) return 0;
        const auto uc = static_cast<std::size_t>(c);
        if (total > std::numeric_limits<std::size_t>::max() / uc) {
            return std::numeric_limits<std::size_t>::max();
        }
        total *= uc;
    }
    return total;
}

/// Odometer increment over assignments; returns false when wrapping to zero.
inline bool next_assignment(std::span<int> assignment, std::span<const int> cards) {
    for (std::size_t i = assignment.size(); i-- > 0;) {
        if (++assignment[i] < cards[i]) return true;
        assignment[i] = 0;
    }
    return false;
}

}  // namespace driftcause

#endif  // DRIFTCAUSE_STATE_SPACE_HPP
