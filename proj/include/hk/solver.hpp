#pragma once

// Exact decision procedure for the graph-sequence feasibility program.
//
// With the graphs I_0..I_{t-1} fixed, x^t = A_{t-1} ... A_0 x^0 where A_I is
// the averaging matrix of I, so every consistency condition at time t is a
// linear inequality in x^0 alone. The search walks sequences depth first and
// prunes a prefix as soon as the exact LP over x^0 becomes infeasible.

#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/simplex.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hk {

/// Pair (i, j), i < j, whose gap is constrained by graph consistency.
struct PairBound {
    int i = 0;
    int j = 0;
    bool edge = false;  // edge: gap <= 1 + eps, non-edge: gap >= 1 - eps
};

/// Minimal pair set equivalent to consistent() on sorted profiles: the
/// widest edge starting at each new rightmost value and the narrowest
/// non-edge ending before each step of r.
std::vector<PairBound> consistency_pairs(const OrderedUIGraph& g);

/// Row-stochastic averaging matrix of g applied to `map` (n x n, rows are agents).
using LinearMap = std::vector<std::vector<Rational>>;
LinearMap identity_map(int n);
LinearMap apply_averaging(const OrderedUIGraph& g, const LinearMap& map);

/// Consistency of a single graph as a system over a sorted profile in [0, n].
LinearSystem consistency_system(const OrderedUIGraph& g, const Rational& eps);

/// Exact profile whose influence graph is g, when one exists with margin eps < 0.
std::optional<OpinionProfile> realize(const OrderedUIGraph& g, const Rational& eps);

struct Certificate {
    OpinionProfile witness;             // sorted, within [0, n]
    std::vector<OrderedUIGraph> graphs; // I_0 .. I_T
    Rational eps;
    int horizon = 0;                    // T
    /// Non-edges were required to exceed 1 - eps strictly (exact update-rule
    /// semantics at eps = 0).
    bool strict_nonedges = false;
};

nlohmann::json to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& j);

enum class Verdict { Feasible, Infeasible, Undecided };
std::string to_string(Verdict v);

struct SearchStats {
    std::uint64_t lp_calls = 0;
    std::uint64_t pruned = 0;
    std::uint64_t feasible_leaves = 0;
    std::uint64_t pivots = 0;
    /// Full sequences covered by pruned prefixes plus evaluated leaves. Equals
    /// the total sequence count when the search runs to exhaustion.
    BigInt sequences_accounted = 0;

    SearchStats& operator+=(const SearchStats& o);
};

struct SearchOptions {
    std::uint64_t budget = 10'000'000;  // LP calls before giving up
    int jobs = 1;
    bool prune = true;        // false: only leaves are checked
    bool exhaustive = false;  // keep going after the first feasible leaf
    /// Non-edge gaps must be > 1 - eps instead of >= 1 - eps. At eps = 0 this
    /// is exactly the update rule's neighbor relation.
    bool strict_nonedges = false;
    int enumeration_limit = kDefaultEnumerationLimit;
};

struct FeasOutcome {
    Verdict verdict = Verdict::Undecided;
    std::optional<Certificate> certificate;
    SearchStats stats;
};

/// Number of sequences (I_0..I_T) with I_t != K_n for t < T.
BigInt sequence_count(int n, int horizon);

/// Searches graph sequences I_0..I_T (I_t != K_n for t < T) consistent with
/// some sorted x^0 in [0, n]^n at margin eps. Child order is the canonical
/// graph order, so the complete graph is tried last. A Feasible outcome has
/// already passed replay_certificate.
FeasOutcome search_sequence(int n, int horizon, const Rational& eps, const SearchOptions& options = {});

struct FStep {
    int horizon = 0;
    std::optional<Verdict> margin;  // eps < 0 run, skipped once the lower bound already exceeds T
    std::optional<Verdict> exact;   // eps = 0 with strict non-edges, when run
    SearchStats stats;
};

struct FBounds {
    int n = 0;
    long lower = 0;
    std::optional<long> upper;
    std::optional<Certificate> certificate;  // witness for the lower bound, if any
    std::vector<FStep> steps;

    bool exact() const { return upper && *upper == lower; }
};

struct FBoundsOptions {
    Rational strict_eps = Rational(-1, 1000);
    SearchOptions search;
};

/// Runs T = 1, 2, ... up to t_max. Feasibility at eps < 0 gives f(n) >= T+1.
/// Otherwise the instance is decided under exact semantics (eps = 0, strict
/// non-edges): feasible gives f(n) >= T+1, infeasible gives f(n) <= T. The
/// closed eps = 0 program is not used for upper bounds because a gap of
/// exactly 1 satisfies its non-edge rows although the update rule treats it
/// as an edge.
FBounds f_bounds(int n, int t_max, const FBoundsOptions& options = {});

struct ReplayResult {
    bool ok = false;
    std::string diagnostic;
};

/// Replays the witness with the exact update rule and checks the realized
/// profiles against the certificate's graphs at its eps (for strict
/// certificates the realized graph must match exactly). For eps < 0 and for
/// strict certificates also requires f_of(witness) >= T + 1.
ReplayResult replay_certificate(const Certificate& c);

}  // namespace hk
