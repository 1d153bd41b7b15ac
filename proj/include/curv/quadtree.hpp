#pragma once

#include <cstddef>
#include <vector>

#include "curv/measure.hpp"

namespace curv {

// Quadtree over the atoms of a measure. Node masses are cached; box and
// ball queries prune on node bounds and test atoms exactly at the leaves,
// so query results match a brute-force scan. Traversal order is fixed,
// which keeps accumulated masses reproducible.
class QuadTree {
public:
    explicit QuadTree(const Measure& m);

    const Measure& measure() const { return *m_; }
    const Box& root_box() const { return nodes_[0].bounds; }

    double mass_in_box(const Box& q) const;
    // ascending atom indices
    std::vector<std::size_t> atoms_in_box(const Box& q) const;
    std::vector<std::size_t> atoms_in_ball(PlanarPoint center, double r) const;

    // for invariant checks
    std::size_t node_count() const { return nodes_.size(); }
    double node_mass(std::size_t k) const { return nodes_[k].mass; }
    double subtree_atom_mass(std::size_t k) const;
    std::size_t child(std::size_t k, int c) const { return nodes_[k].kids[c]; }
    bool is_leaf(std::size_t k) const { return nodes_[k].kids[0] == npos; }

    static constexpr std::size_t npos = (std::size_t)-1;

private:
    struct Node {
        Box bounds;
        double mass = 0.0;
        std::size_t first = 0, count = 0; // slice of order_ (leaves)
        std::size_t kids[4] = {npos, npos, npos, npos};
    };

    void mass_rec(std::size_t k, const Box& q, KahanSum& acc) const;
    void box_rec(std::size_t k, const Box& q, std::vector<std::size_t>& out) const;
    void ball_rec(std::size_t k, PlanarPoint c, double r, double r2,
                  std::vector<std::size_t>& out) const;

    const Measure* m_;
    std::vector<Node> nodes_;
    std::vector<std::size_t> order_;
};

} // namespace curv
