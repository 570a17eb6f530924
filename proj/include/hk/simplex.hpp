#pragma once

// Exact feasibility simplex over rationals in the bounded-variable tableau
// form: every constraint row defines a basic slack s = a . y with optional
// bounds, and check() repairs bound violations with Bland's smallest-index
// rule, which guarantees termination. Rows can be appended after a
// successful check(), so a depth-first search can warm start each child from
// a copy of its parent.
//
// Strict bounds are handled symbolically: values and bounds live in
// Q + Q*delta for an infinitesimal delta > 0, and a concrete delta is chosen
// only when a rational point is extracted.

#include "hk/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hk {

/// a + b * delta, ordered lexicographically.
struct DeltaRational {
    Rational a;
    Rational b;

    DeltaRational() = default;
    DeltaRational(Rational real, Rational inf = 0) : a(std::move(real)), b(std::move(inf)) {}

    DeltaRational& operator+=(const DeltaRational& o) {
        a += o.a;
        b += o.b;
        return *this;
    }
    friend DeltaRational operator+(DeltaRational x, const DeltaRational& y) { return x += y; }
    friend DeltaRational operator-(const DeltaRational& x, const DeltaRational& y) {
        return {x.a - y.a, x.b - y.b};
    }
    friend DeltaRational operator*(const Rational& k, const DeltaRational& x) { return {k * x.a, k * x.b}; }
    friend DeltaRational operator/(const DeltaRational& x, const Rational& k) { return {x.a / k, x.b / k}; }
    friend bool operator==(const DeltaRational& x, const DeltaRational& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator<(const DeltaRational& x, const DeltaRational& y) {
        return x.a < y.a || (x.a == y.a && x.b < y.b);
    }
    friend bool operator>(const DeltaRational& x, const DeltaRational& y) { return y < x; }
    friend bool operator<=(const DeltaRational& x, const DeltaRational& y) { return !(y < x); }
    friend bool operator>=(const DeltaRational& x, const DeltaRational& y) { return !(x < y); }
};

/// One bound used in an infeasibility explanation: `multiplier` times the
/// bound inequality of variable `var` (upper: v <= u, lower: v >= l).
struct BoundTerm {
    int var = 0;
    bool upper = false;
    Rational multiplier;
};

class Simplex {
public:
    explicit Simplex(int structural);

    int structural_count() const { return structural_; }
    int variable_count() const { return static_cast<int>(value_.size()); }
    std::size_t row_count() const { return rows_.size(); }

    /// `strict` turns v >= lo into v > lo (and v <= hi into v < hi).
    void set_lower(int var, const Rational& lo, bool strict = false);
    void set_upper(int var, const Rational& hi, bool strict = false);

    /// Appends the slack s = coeffs . y (one coefficient per structural
    /// variable) and returns its variable id. The slack starts unbounded.
    int add_row(std::span<const Rational> coeffs);

    /// Returns true when every bound is satisfied after repair.
    bool check();

    const DeltaRational& value(int var) const { return value_[static_cast<std::size_t>(var)]; }
    /// A concrete delta > 0 at which every bound holds for the current values.
    Rational concrete_delta() const;
    /// Structural part of the current point with delta made concrete.
    std::vector<Rational> structural_values() const;

    /// After check() returned false: non-negative combination of bound
    /// inequalities whose sum reads 0 <= negative.
    const std::vector<BoundTerm>& conflict() const { return conflict_; }

    std::size_t pivot_count() const { return pivots_; }

private:
    struct Row {
        int basic = 0;
        std::vector<Rational> coeff;  // indexed by nonbasic column
    };

    bool below(int var) const;
    bool above(int var) const;
    void set_bound(int var, DeltaRational bound, bool upper);
    void update_and_pivot(std::size_t row, int column, const DeltaRational& target);
    void explain(std::size_t row, bool raise);

    int structural_;
    std::vector<std::optional<DeltaRational>> lower_;
    std::vector<std::optional<DeltaRational>> upper_;
    std::vector<DeltaRational> value_;
    std::vector<int> row_of_;     // row index of a basic variable, -1 if nonbasic
    std::vector<int> column_of_;  // column of a nonbasic variable, -1 if basic
    std::vector<int> column_var_; // variable currently sitting in each column
    std::vector<Row> rows_;
    std::vector<BoundTerm> conflict_;
    std::size_t pivots_ = 0;
    int crossed_ = -1;  // a variable whose lower bound exceeds its upper bound
};

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
    std::vector<Rational> coeff;  // dense over the system's variables
    Sense sense = Sense::LessEqual;
    Rational rhs;
};

/// Variables are free; all restrictions are explicit constraints.
struct LinearSystem {
    int variables = 0;
    std::vector<LinearConstraint> constraints;

    void add(std::vector<Rational> coeff, Sense sense, Rational rhs);
};

/// Farkas-style multiplier on constraint `index`; `upper` selects the "<="
/// side (for Equal constraints either side may appear).
struct FarkasTerm {
    std::size_t index = 0;
    bool upper = false;
    Rational multiplier;
};

struct LpResult {
    bool feasible = false;
    std::vector<Rational> point;      // set when feasible
    std::vector<FarkasTerm> farkas;   // set when infeasible
};

/// Exact feasibility check; deterministic for a given constraint order.
LpResult lp_feasible(const LinearSystem& system);

/// Validates an infeasibility explanation: the weighted sum of the selected
/// inequalities (all brought to "<=" form) has zero left side and negative rhs.
bool verify_farkas(const LinearSystem& system, const std::vector<FarkasTerm>& farkas);

}  // namespace hk
