#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace refp::detail {

// True when every unit of demand on the left can be routed to right-hand
// capacity along edges fits(i, j), i.e. a perfect matching of the expanded slots.
template <typename Fits>
auto saturating_flow(const std::vector<std::uint32_t> & demand, const std::vector<std::uint32_t> & capacity, Fits fits) -> bool
{
    std::size_t ns = demand.size(), nb = capacity.size();
    std::vector<std::vector<std::size_t>> adj(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < nb; ++j)
            if (fits(i, j))
                adj[i].push_back(j);
        if (adj[i].empty())
            return false;
    }
    std::vector<std::vector<std::uint32_t>> flow(ns, std::vector<std::uint32_t>(nb, 0));
    std::vector<std::uint32_t> left = demand, room = capacity;

    for (std::size_t i = 0; i < ns; ++i)
        for (auto j : adj[i]) {
            auto t = std::min(left[i], room[j]);
            flow[i][j] += t;
            left[i] -= t;
            room[j] -= t;
        }

    // residual graph: left -> right along adj, right -> left along positive flow
    while (true) {
        std::size_t src = ns;
        for (std::size_t i = 0; i < ns; ++i)
            if (left[i] > 0) {
                src = i;
                break;
            }
        if (src == ns)
            return true;
        std::vector<int> prev_small(ns, -2), prev_big(nb, -2);
        prev_small[src] = -1;
        std::vector<std::size_t> queue{src};
        std::size_t sink = nb;
        for (std::size_t qi = 0; qi < queue.size() && sink == nb; ++qi) {
            auto i = queue[qi];
            for (auto j : adj[i]) {
                if (prev_big[j] != -2)
                    continue;
                prev_big[j] = static_cast<int>(i);
                if (room[j] > 0) {
                    sink = j;
                    break;
                }
                for (std::size_t i2 = 0; i2 < ns; ++i2)
                    if (flow[i2][j] > 0 && prev_small[i2] == -2) {
                        prev_small[i2] = static_cast<int>(j);
                        queue.push_back(i2);
                    }
            }
        }
        if (sink == nb)
            return false;
        std::size_t j = sink;
        --room[j];
        while (true) {
            auto i = static_cast<std::size_t>(prev_big[j]);
            ++flow[i][j];
            if (prev_small[i] == -1) {
                --left[i];
                break;
            }
            auto j2 = static_cast<std::size_t>(prev_small[i]);
            --flow[i][j2];
            j = j2;
        }
    }
}

}
