#include "hk/graphs.hpp"

#include "hk/dynamics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>

namespace hk {

OrderedUIGraph::OrderedUIGraph(std::vector<int> rightmost) : r_(std::move(rightmost)) {
    const int n = size();
    if (n < 1) throw DomainError("graph needs at least one vertex");
    for (int i = 1; i <= n; ++i) {
        const int ri = r_[static_cast<std::size_t>(i - 1)];
        if (ri < i || ri > n) {
            throw DomainError("rightmost neighbor of vertex " + std::to_string(i) + " out of range");
        }
        if (i > 1 && ri < r_[static_cast<std::size_t>(i - 2)]) {
            throw DomainError("rightmost-neighbor sequence must be non-decreasing");
        }
    }
}

int OrderedUIGraph::leftmost(int i) const {
    // r is non-decreasing, so the first vertex reaching i is the leftmost neighbor.
    const auto it = std::lower_bound(r_.begin(), r_.end(), i);
    return static_cast<int>(it - r_.begin()) + 1;
}

bool OrderedUIGraph::has_edge(int i, int j) const {
    if (i == j) return false;
    if (i > j) std::swap(i, j);
    return rightmost(i) >= j;
}

long long OrderedUIGraph::edge_count() const {
    long long e = 0;
    for (int i = 1; i <= size(); ++i) e += rightmost(i) - i;
    return e;
}

bool OrderedUIGraph::is_complete() const {
    return std::all_of(r_.begin(), r_.end(), [n = size()](int ri) { return ri == n; });
}

bool OrderedUIGraph::is_connected() const {
    for (int i = 1; i < size(); ++i) {
        if (rightmost(i) < i + 1) return false;
    }
    return true;
}

std::string to_string(const OrderedUIGraph& g) {
    std::ostringstream os;
    os << '(';
    for (int i = 1; i <= g.size(); ++i) os << (i > 1 ? "," : "") << g.rightmost(i);
    os << ')';
    return os.str();
}

BigInt connected_graph_count(int n) {
    if (n < 1) throw DomainError("n must be positive");
    BigInt c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(2 * n - 2), static_cast<unsigned long>(n - 1));
    return c / n;
}

namespace {

// Lattice-path walk: position i picks r[i] in [max(r[i-1], i+1), n].
void extend(int n, std::vector<int>& r, std::vector<OrderedUIGraph>& out) {
    const int i = static_cast<int>(r.size()) + 1;
    if (i == n) {
        r.push_back(n);
        out.emplace_back(r);
        r.pop_back();
        return;
    }
    const int lo = std::max(r.empty() ? 0 : r.back(), i + 1);
    for (int v = lo; v <= n; ++v) {
        r.push_back(v);
        extend(n, r, out);
        r.pop_back();
    }
}

}  // namespace

std::vector<OrderedUIGraph> enumerate_connected(int n, int limit) {
    if (n < 1) throw DomainError("n must be positive");
    if (n > limit) {
        throw DomainError("refusing to enumerate connected graphs for n = " + std::to_string(n) +
                          " (limit " + std::to_string(limit) + ")");
    }
    std::vector<OrderedUIGraph> out;
    out.reserve(connected_graph_count(n).get_ui());
    std::vector<int> r;
    r.reserve(static_cast<std::size_t>(n));
    extend(n, r, out);
    return out;
}

std::size_t complete_graph_index(const std::vector<OrderedUIGraph>& graphs) {
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        if (graphs[g].is_complete()) return g;
    }
    throw DomainError("graph list has no complete graph");
}

bool consistent(const OrderedUIGraph& g, const OpinionProfile& p, const Rational& eps) {
    const int n = g.size();
    if (p.size() != n) throw DomainError("graph and profile sizes differ");
    const Rational edge_max = 1 + eps;
    const Rational gap_min = 1 - eps;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            const Rational d = p.at(j) - p.at(i);
            if (g.has_edge(i, j) ? d > edge_max : d < gap_min) return false;
        }
    }
    return true;
}

nlohmann::json to_json(const OrderedUIGraph& g) {
    return nlohmann::json{{"n", g.size()}, {"r", g.rightmost()}};
}

OrderedUIGraph graph_from_json(const nlohmann::json& j) {
    try {
        auto r = j.at("r").get<std::vector<int>>();
        if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(r.size())) {
            throw DomainError("graph JSON: n does not match length of r");
        }
        return OrderedUIGraph(std::move(r));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("graph JSON: ") + e.what());
    }
}

}  // namespace hk
