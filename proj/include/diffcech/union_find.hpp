/**
 * Disjoint-set forest over dense indices with union by size and path halving.
 */
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace diffcech {

class UnionFind {
public:
    explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1), sets_(n) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t size() const { return parent_.size(); }
    std::size_t set_count() const { return sets_; }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Returns true when two distinct classes were merged.
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        --sets_;
        return true;
    }

    /// Class labels 0..k-1, numbered by first appearance in index order.
    std::vector<std::uint32_t> labels(std::size_t* count = nullptr) {
        std::vector<std::uint32_t> out(parent_.size());
        std::vector<std::uint32_t> root_label(parent_.size(), UINT32_MAX);
        std::uint32_t next = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) {
            std::size_t r = find(i);
            if (root_label[r] == UINT32_MAX) root_label[r] = next++;
            out[i] = root_label[r];
        }
        if (count) *count = next;
        return out;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t sets_;
};

}  // namespace diffcech
