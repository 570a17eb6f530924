#include "hk/dynamics.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace hk {

OpinionProfile::OpinionProfile(std::vector<Rational> opinions) : x_(std::move(opinions)) {
    if (x_.empty()) throw DomainError("profile needs at least one agent");
    if (!std::is_sorted(x_.begin(), x_.end())) throw DomainError("profile is not sorted");
}

OpinionProfile OpinionProfile::from_unsorted(std::vector<Rational> opinions, bool* was_sorted) {
    const bool sorted = std::is_sorted(opinions.begin(), opinions.end());
    if (was_sorted) *was_sorted = sorted;
    if (!sorted) std::sort(opinions.begin(), opinions.end());
    return OpinionProfile(std::move(opinions));
}

std::string to_string(const OpinionProfile& p) {
    std::ostringstream os;
    os << '(';
    for (int i = 1; i <= p.size(); ++i) os << (i > 1 ? ", " : "") << to_string(p.at(i));
    os << ')';
    return os.str();
}

namespace {

void check_agent(const OpinionProfile& p, int i) {
    if (i < 1 || i > p.size()) {
        throw DomainError("agent index " + std::to_string(i) + " out of range 1.." + std::to_string(p.size()));
    }
}

}  // namespace

std::pair<int, int> neighbor_interval(const OpinionProfile& p, int i) {
    check_agent(p, i);
    const auto xs = p.values();
    const Rational lo = p.at(i) - 1;
    const Rational hi = p.at(i) + 1;
    const auto first = std::lower_bound(xs.begin(), xs.end(), lo);
    const auto last = std::upper_bound(xs.begin(), xs.end(), hi);
    return {static_cast<int>(first - xs.begin()) + 1, static_cast<int>(last - xs.begin())};
}

OpinionProfile step(const OpinionProfile& p) {
    const int n = p.size();
    std::vector<Rational> prefix(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) prefix[static_cast<std::size_t>(i)] = prefix[static_cast<std::size_t>(i - 1)] + p.at(i);

    std::vector<Rational> next(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto [l, r] = neighbor_interval(p, i);
        Rational sum = prefix[static_cast<std::size_t>(r)] - prefix[static_cast<std::size_t>(l - 1)];
        next[static_cast<std::size_t>(i - 1)] = sum / (r - l + 1);
    }
    return OpinionProfile(std::move(next));
}

OrderedUIGraph influence_graph(const OpinionProfile& p) {
    std::vector<int> r(static_cast<std::size_t>(p.size()));
    for (int i = 1; i <= p.size(); ++i) r[static_cast<std::size_t>(i - 1)] = neighbor_interval(p, i).second;
    return OrderedUIGraph(std::move(r));
}

int weight_at(const OpinionProfile& p, int i) {
    check_agent(p, i);
    const auto xs = p.values();
    const auto [first, last] = std::equal_range(xs.begin(), xs.end(), p.at(i));
    return static_cast<int>(last - first);
}

bool is_consensus(const OpinionProfile& p) { return weight_at(p, 1) == p.size(); }

bool has_split(const OpinionProfile& p) {
    for (int i = 1; i < p.size(); ++i) {
        if (p.at(i + 1) - p.at(i) > 1) return true;
    }
    return false;
}

int cluster_count(const OpinionProfile& p) {
    int c = 1;
    for (int i = 1; i < p.size(); ++i) c += p.at(i + 1) != p.at(i) ? 1 : 0;
    return c;
}

std::string to_string(const TerminationStatus& s) {
    std::ostringstream os;
    const char* sep = "";
    if (s.consensus) { os << sep << "Consensus(" << *s.consensus << ")"; sep = " "; }
    if (s.split) { os << sep << "Split(" << *s.split << ")"; sep = " "; }
    if (s.fixed_point) { os << sep << "FixedPoint(" << *s.fixed_point << ")"; sep = " "; }
    if (s.cap_exceeded) os << sep << "CapExceeded";
    return os.str();
}

std::size_t default_step_cap(int n) {
    const auto m = static_cast<std::size_t>(n);
    return m * m * m + 100;
}

Trajectory simulate(const OpinionProfile& p, std::size_t cap) {
    if (cap < 1) throw DomainError("step cap must be at least 1");
    Trajectory traj;
    traj.profiles.push_back(p);
    auto& term = traj.termination;
    for (std::size_t t = 0;; ++t) {
        const OpinionProfile& cur = traj.profiles.back();
        traj.graphs.push_back(influence_graph(cur));
        if (!term.consensus && is_consensus(cur)) term.consensus = t;
        if (!term.split && has_split(cur)) term.split = t;
        OpinionProfile next = step(cur);
        if (next == cur) {
            term.fixed_point = t;
            return traj;
        }
        if (t + 1 > cap) {
            term.cap_exceeded = true;
            return traj;
        }
        traj.profiles.push_back(std::move(next));
    }
}

std::size_t f_of(const OpinionProfile& p, std::size_t cap) {
    const auto term = simulate(p, cap).termination;
    if (!term.consensus && !term.split) {
        throw DomainError("neither consensus nor split within " + std::to_string(cap) + " steps");
    }
    return std::min(term.consensus.value_or(cap + 1), term.split.value_or(cap + 1));
}

std::size_t convergence_time(const OpinionProfile& p, std::size_t cap) {
    const auto term = simulate(p, cap).termination;
    if (!term.fixed_point) throw DomainError("no fixed point within " + std::to_string(cap) + " steps");
    return *term.fixed_point;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, bool approx) {
    out << "t,agent,numerator,denominator" << (approx ? ",approx" : "") << '\n';
    for (std::size_t t = 0; t < traj.profiles.size(); ++t) {
        const auto& p = traj.profiles[t];
        for (int i = 1; i <= p.size(); ++i) {
            out << t << ',' << i << ',' << p.at(i).get_num().get_str() << ',' << p.at(i).get_den().get_str();
            if (approx) out << ',' << to_decimal_string(p.at(i), 9);
            out << '\n';
        }
    }
    out << "# termination: " << to_string(traj.termination) << '\n';
}

}  // namespace hk
