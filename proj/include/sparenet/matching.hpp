#pragma once

#include <vector>

namespace sparenet {

namespace detail {

inline bool try_kuhn(int v, const std::vector<std::vector<int>>& left_adj,
                     std::vector<int>& match_right, std::vector<char>& used) {
    for (int r : left_adj[static_cast<std::size_t>(v)]) {
        if (used[static_cast<std::size_t>(r)]) continue;
        used[static_cast<std::size_t>(r)] = 1;
        if (match_right[static_cast<std::size_t>(r)] < 0 ||
            try_kuhn(match_right[static_cast<std::size_t>(r)], left_adj, match_right, used)) {
            match_right[static_cast<std::size_t>(r)] = v;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Maximum bipartite matching size via augmenting paths. left_adj[v] lists the
// right-side vertices adjacent to left vertex v.
inline int max_bipartite_matching(const std::vector<std::vector<int>>& left_adj, int n_right) {
    std::vector<int> match_right(static_cast<std::size_t>(n_right), -1);
    std::vector<char> used;
    int matched = 0;
    for (std::size_t v = 0; v < left_adj.size(); ++v) {
        used.assign(static_cast<std::size_t>(n_right), 0);
        if (detail::try_kuhn(static_cast<int>(v), left_adj, match_right, used)) ++matched;
    }
    return matched;
}

}  // namespace sparenet
