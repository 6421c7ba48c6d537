#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

// Partitions of the arm index set {0, ..., N-1} and the connected-components
// extraction that turns the similarity graph into a clustering. Partitions
// are canonicalized (blocks sorted by smallest member, members ascending) so
// equality is plain structural comparison.

namespace kabc {

class Partition {
public:
    Partition() = default;

    // Blocks must be disjoint, nonempty, and cover {0, ..., n-1} exactly;
    // throws std::invalid_argument otherwise. Canonicalizes on construction.
    Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t n);

    static Partition singletons(std::size_t n);

    const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
    std::size_t num_blocks() const { return blocks_.size(); }
    std::size_t num_items() const { return num_items_; }

    // Index of the block containing item i.
    std::size_t block_of(std::size_t i) const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::vector<std::size_t>> blocks_;
    std::size_t num_items_ = 0;
};

class UnionFind {
public:
    explicit UnionFind(std::size_t n);

    std::size_t find(std::size_t x);
    void unite(std::size_t x, std::size_t y);

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> rank_;
};

// Connected components of the undirected graph ({0..n-1}, edges), as a
// canonical Partition. Throws std::invalid_argument on out-of-range indices.
Partition connected_components(
    std::size_t n,
    std::span<const std::pair<std::size_t, std::size_t>> edges);

}  // namespace kabc
