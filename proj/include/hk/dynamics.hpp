#pragma once

// Exact Hegselmann-Krause dynamics with confidence radius 1.
// Agent indices are 1-based, matching the graph encoding.

#include "hk/graphs.hpp"
#include "hk/rational.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hk {

/// Non-decreasing sequence of n >= 1 opinions.
class OpinionProfile {
public:
    /// Throws DomainError if empty or not sorted.
    explicit OpinionProfile(std::vector<Rational> opinions);

    /// Sorts the input; `was_sorted` reports whether it already was.
    static OpinionProfile from_unsorted(std::vector<Rational> opinions, bool* was_sorted = nullptr);

    int size() const { return static_cast<int>(x_.size()); }
    const Rational& at(int i) const { return x_[static_cast<std::size_t>(i - 1)]; }
    std::span<const Rational> values() const { return x_; }

    friend bool operator==(const OpinionProfile&, const OpinionProfile&) = default;

private:
    std::vector<Rational> x_;
};

std::string to_string(const OpinionProfile& p);

/// Inclusive index range of agents within distance 1 of agent i.
std::pair<int, int> neighbor_interval(const OpinionProfile& p, int i);

/// One synchronous update: every agent moves to the mean of its neighbors.
OpinionProfile step(const OpinionProfile& p);

/// Graph with an edge between agents at distance <= 1. May be disconnected.
OrderedUIGraph influence_graph(const OpinionProfile& p);

/// Number of agents holding exactly the opinion of agent i.
int weight_at(const OpinionProfile& p, int i);

bool is_consensus(const OpinionProfile& p);
/// Some consecutive pair is more than 1 apart.
bool has_split(const OpinionProfile& p);
/// Number of distinct opinion values.
int cluster_count(const OpinionProfile& p);

struct TerminationStatus {
    std::optional<std::size_t> consensus;    // earliest t with all opinions equal
    std::optional<std::size_t> split;        // earliest t with a gap > 1
    std::optional<std::size_t> fixed_point;  // earliest T with step(x(T)) == x(T)
    bool cap_exceeded = false;
};

std::string to_string(const TerminationStatus& s);

struct Trajectory {
    std::vector<OpinionProfile> profiles;  // t = 0 .. T_end
    std::vector<OrderedUIGraph> graphs;    // influence graph of profiles[t]
    TerminationStatus termination;
};

/// n^3 + 100.
std::size_t default_step_cap(int n);

/// Iterates step() until an exact fixed point or `cap` steps have been taken.
Trajectory simulate(const OpinionProfile& p, std::size_t cap);
inline Trajectory simulate(const OpinionProfile& p) { return simulate(p, default_step_cap(p.size())); }

/// Earliest t with consensus or a split. Throws DomainError if the cap binds first.
std::size_t f_of(const OpinionProfile& p, std::size_t cap);
inline std::size_t f_of(const OpinionProfile& p) { return f_of(p, default_step_cap(p.size())); }

/// Smallest T after which the profile never changes. Throws DomainError if the cap binds.
std::size_t convergence_time(const OpinionProfile& p, std::size_t cap);
inline std::size_t convergence_time(const OpinionProfile& p) {
    return convergence_time(p, default_step_cap(p.size()));
}

/// CSV with header t,agent,numerator,denominator (plus an approx column when
/// requested) and a trailing "# termination:" line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool approx = false);

}  // namespace hk
