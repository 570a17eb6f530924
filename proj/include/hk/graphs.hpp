#pragma once

// Ordered unit interval graphs on vertices 1..n, stored by their
// rightmost-neighbor sequence. Vertex labels are 1-based throughout.

#include "hk/rational.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hk {

class OpinionProfile;

/// r[i-1] is the largest neighbor of vertex i (or i itself when it has no
/// right neighbor). Valid encodings are non-decreasing with i <= r[i] <= n;
/// edge {i, j}, i < j, is present iff r[i] >= j.
class OrderedUIGraph {
public:
    /// Throws DomainError when the sequence is not a valid encoding.
    explicit OrderedUIGraph(std::vector<int> rightmost);

    int size() const { return static_cast<int>(r_.size()); }
    const std::vector<int>& rightmost() const { return r_; }
    int rightmost(int i) const { return r_[static_cast<std::size_t>(i - 1)]; }
    /// Smallest neighbor of i (i itself when it has no left neighbor).
    int leftmost(int i) const;
    /// Closed neighborhood of i as the inclusive index range [l, r].
    std::pair<int, int> neighborhood(int i) const { return {leftmost(i), rightmost(i)}; }
    int degree(int i) const { return rightmost(i) - leftmost(i); }

    bool has_edge(int i, int j) const;
    /// Number of edges, sum of r[i] - i.
    long long edge_count() const;
    bool is_complete() const;
    /// Member of the connected class: r[i] >= i + 1 for every i < n.
    bool is_connected() const;

    friend bool operator==(const OrderedUIGraph&, const OrderedUIGraph&) = default;
    friend auto operator<=>(const OrderedUIGraph& a, const OrderedUIGraph& b) { return a.r_ <=> b.r_; }

private:
    std::vector<int> r_;
};

std::string to_string(const OrderedUIGraph& g);

/// Number of connected ordered unit interval graphs on n vertices,
/// binom(2n-2, n-1) / n.
BigInt connected_graph_count(int n);

/// Default refusal threshold for enumerate_connected.
inline constexpr int kDefaultEnumerationLimit = 14;

/// All connected graphs on n vertices in lexicographic order of r. The complete
/// graph is always last. Refuses n above `limit`.
std::vector<OrderedUIGraph> enumerate_connected(int n, int limit = kDefaultEnumerationLimit);

/// Index of the complete graph in the canonical enumeration order.
std::size_t complete_graph_index(const std::vector<OrderedUIGraph>& graphs);

/// BLP-style consistency: every edge pair has p[j] - p[i] <= 1 + eps and every
/// non-edge pair has p[j] - p[i] >= 1 - eps. At eps = 0 a gap of exactly one
/// satisfies both, so this deliberately differs from influence_graph at the
/// boundary.
bool consistent(const OrderedUIGraph& g, const OpinionProfile& p, const Rational& eps);

nlohmann::json to_json(const OrderedUIGraph& g);
OrderedUIGraph graph_from_json(const nlohmann::json& j);

}  // namespace hk
