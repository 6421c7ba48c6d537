#include "kabc/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kabc {

Partition::Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t n)
    : blocks_(std::move(blocks)), num_items_(n) {
    std::vector<bool> seen(n, false);
    std::size_t covered = 0;
    for (auto& block : blocks_) {
        if (block.empty()) {
            throw std::invalid_argument("partition: empty block");
        }
        std::sort(block.begin(), block.end());
        for (std::size_t i : block) {
            if (i >= n) {
                throw std::invalid_argument("partition: index " +
                                            std::to_string(i) + " out of range");
            }
            if (seen[i]) {
                throw std::invalid_argument("partition: index " +
                                            std::to_string(i) + " repeated");
            }
            seen[i] = true;
            ++covered;
        }
    }
    if (covered != n) {
        throw std::invalid_argument("partition: blocks cover " +
                                    std::to_string(covered) + " of " +
                                    std::to_string(n) + " items");
    }
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::vector<std::size_t>> blocks(n);
    for (std::size_t i = 0; i < n; ++i) blocks[i] = {i};
    return Partition(std::move(blocks), n);
}

std::size_t Partition::block_of(std::size_t i) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (std::binary_search(blocks_[b].begin(), blocks_[b].end(), i)) return b;
    }
    throw std::invalid_argument("partition: item " + std::to_string(i) +
                                " not covered");
}

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t UnionFind::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];  // path halving
        x = parent_[x];
    }
    return x;
}

void UnionFind::unite(std::size_t x, std::size_t y) {
    std::size_t rx = find(x);
    std::size_t ry = find(y);
    if (rx == ry) return;
    if (rank_[rx] < rank_[ry]) std::swap(rx, ry);
    parent_[ry] = rx;
    if (rank_[rx] == rank_[ry]) ++rank_[rx];
}

Partition connected_components(
    std::size_t n,
    std::span<const std::pair<std::size_t, std::size_t>> edges) {
    UnionFind uf(n);
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n) {
            throw std::invalid_argument("connected_components: edge (" +
                                        std::to_string(i) + ", " +
                                        std::to_string(j) + ") out of range");
        }
        uf.unite(i, j);
    }
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
        groups[uf.find(i)].push_back(i);
    }
    std::vector<std::vector<std::size_t>> blocks;
    for (auto& group : groups) {
        if (!group.empty()) blocks.push_back(std::move(group));
    }
    return Partition(std::move(blocks), n);
}

}  // namespace kabc
