#include "hk/simplex.hpp"

#include <stdexcept>

namespace hk {

Simplex::Simplex(int structural)
    : structural_(structural),
      lower_(static_cast<std::size_t>(structural)),
      upper_(static_cast<std::size_t>(structural)),
      value_(static_cast<std::size_t>(structural)),
      row_of_(static_cast<std::size_t>(structural), -1),
      column_of_(static_cast<std::size_t>(structural)),
      column_var_(static_cast<std::size_t>(structural)) {
    if (structural < 1) throw std::invalid_argument("simplex needs at least one variable");
    for (int j = 0; j < structural; ++j) {
        column_of_[static_cast<std::size_t>(j)] = j;
        column_var_[static_cast<std::size_t>(j)] = j;
    }
}

void Simplex::set_lower(int var, const Rational& lo, bool strict) {
    set_bound(var, DeltaRational(lo, strict ? 1 : 0), false);
}

void Simplex::set_upper(int var, const Rational& hi, bool strict) {
    set_bound(var, DeltaRational(hi, strict ? -1 : 0), true);
}

void Simplex::set_bound(int var, DeltaRational bound, bool upper) {
    const auto v = static_cast<std::size_t>(var);
    (upper ? upper_ : lower_)[v] = std::move(bound);
    if (lower_[v] && upper_[v] && *upper_[v] < *lower_[v]) crossed_ = var;
    // Nonbasic variables must always sit within their bounds.
    if (row_of_[v] < 0) {
        if (lower_[v] && value_[v] < *lower_[v]) {
            update_and_pivot(rows_.size(), column_of_[v], *lower_[v]);
        } else if (upper_[v] && value_[v] > *upper_[v]) {
            update_and_pivot(rows_.size(), column_of_[v], *upper_[v]);
        }
    }
}

int Simplex::add_row(std::span<const Rational> coeffs) {
    if (static_cast<int>(coeffs.size()) != structural_) throw std::invalid_argument("row width mismatch");
    Row row;
    row.basic = variable_count();
    row.coeff.assign(static_cast<std::size_t>(structural_), Rational(0));
    for (int j = 0; j < structural_; ++j) {
        const Rational& a = coeffs[static_cast<std::size_t>(j)];
        if (a == 0) continue;
        const int r = row_of_[static_cast<std::size_t>(j)];
        if (r < 0) {
            row.coeff[static_cast<std::size_t>(column_of_[static_cast<std::size_t>(j)])] += a;
        } else {
            const auto& src = rows_[static_cast<std::size_t>(r)].coeff;
            for (std::size_t c = 0; c < src.size(); ++c) {
                if (src[c] != 0) row.coeff[c] += a * src[c];
            }
        }
    }
    DeltaRational v;
    for (std::size_t c = 0; c < row.coeff.size(); ++c) {
        if (row.coeff[c] != 0) v += row.coeff[c] * value_[static_cast<std::size_t>(column_var_[c])];
    }
    lower_.emplace_back();
    upper_.emplace_back();
    value_.push_back(std::move(v));
    row_of_.push_back(static_cast<int>(rows_.size()));
    column_of_.push_back(-1);
    rows_.push_back(std::move(row));
    return rows_.back().basic;
}

bool Simplex::below(int var) const {
    const auto v = static_cast<std::size_t>(var);
    return lower_[v] && value_[v] < *lower_[v];
}

bool Simplex::above(int var) const {
    const auto v = static_cast<std::size_t>(var);
    return upper_[v] && value_[v] > *upper_[v];
}

// Moves the variable in `column` so that the basic variable of `row` reaches
// `target`, then exchanges the two. With row == rows_.size() only the
// nonbasic variable is moved to `target` (no exchange).
void Simplex::update_and_pivot(std::size_t row, int column, const DeltaRational& target) {
    const auto col = static_cast<std::size_t>(column);
    const int entering = column_var_[col];
    DeltaRational delta;
    if (row == rows_.size()) {
        delta = target - value_[static_cast<std::size_t>(entering)];
    } else {
        const int leaving = rows_[row].basic;
        delta = (target - value_[static_cast<std::size_t>(leaving)]) / rows_[row].coeff[col];
    }
    value_[static_cast<std::size_t>(entering)] += delta;
    for (const auto& r : rows_) {
        if (r.coeff[col] != 0) value_[static_cast<std::size_t>(r.basic)] += r.coeff[col] * delta;
    }
    if (row == rows_.size()) return;

    ++pivots_;
    Row& pr = rows_[row];
    const int leaving = pr.basic;
    const Rational a = pr.coeff[col];
    // entering = (leaving - sum_{c != col} a_c y_c) / a
    for (std::size_t c = 0; c < pr.coeff.size(); ++c) {
        if (c == col) {
            pr.coeff[c] = 1 / a;
        } else if (pr.coeff[c] != 0) {
            pr.coeff[c] = -pr.coeff[c] / a;
        }
    }
    pr.basic = entering;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        if (k == row) continue;
        auto& coeff = rows_[k].coeff;
        const Rational d = coeff[col];
        if (d == 0) continue;
        for (std::size_t c = 0; c < coeff.size(); ++c) {
            if (c == col) {
                coeff[c] = d * pr.coeff[c];
            } else if (pr.coeff[c] != 0) {
                coeff[c] += d * pr.coeff[c];
            }
        }
    }
    row_of_[static_cast<std::size_t>(entering)] = static_cast<int>(row);
    column_of_[static_cast<std::size_t>(entering)] = -1;
    row_of_[static_cast<std::size_t>(leaving)] = -1;
    column_of_[static_cast<std::size_t>(leaving)] = column;
    column_var_[col] = leaving;
}

bool Simplex::check() {
    conflict_.clear();
    if (crossed_ >= 0) {
        conflict_ = {{crossed_, true, Rational(1)}, {crossed_, false, Rational(1)}};
        return false;
    }
    for (;;) {
        // Bland: smallest-index violated basic variable ...
        int leaving = -1;
        for (const auto& r : rows_) {
            if ((below(r.basic) || above(r.basic)) && (leaving < 0 || r.basic < leaving)) leaving = r.basic;
        }
        if (leaving < 0) return true;
        const auto row = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(leaving)]);
        const bool raise = below(leaving);
        const auto& coeff = rows_[row].coeff;

        // ... and smallest-index nonbasic variable with room in the needed direction.
        int best_col = -1;
        for (std::size_t c = 0; c < coeff.size(); ++c) {
            const Rational& a = coeff[c];
            if (a == 0) continue;
            const int var = column_var_[c];
            const auto v = static_cast<std::size_t>(var);
            const bool increase = raise == (a > 0);
            const bool room = increase ? (!upper_[v] || value_[v] < *upper_[v])
                                       : (!lower_[v] || value_[v] > *lower_[v]);
            if (room && (best_col < 0 || var < column_var_[static_cast<std::size_t>(best_col)])) {
                best_col = static_cast<int>(c);
            }
        }
        if (best_col < 0) {
            explain(row, raise);
            return false;
        }
        const auto lv = static_cast<std::size_t>(leaving);
        update_and_pivot(row, best_col, raise ? *lower_[lv] : *upper_[lv]);
    }
}

void Simplex::explain(std::size_t row, bool raise) {
    const Row& r = rows_[row];
    conflict_.push_back({r.basic, !raise, Rational(1)});
    for (std::size_t c = 0; c < r.coeff.size(); ++c) {
        const Rational& a = r.coeff[c];
        if (a == 0) continue;
        // Raising needs every positive coefficient at its upper bound and every
        // negative one at its lower bound; lowering is the mirror case.
        const bool at_upper = raise == (a > 0);
        conflict_.push_back({column_var_[c], at_upper, Rational(abs(a))});
    }
}

Rational Simplex::concrete_delta() const {
    Rational delta = 1;
    // value >= bound must hold at delta: (v.a - l.a) + (v.b - l.b) delta >= 0.
    auto tighten = [&delta](const DeltaRational& hi, const DeltaRational& lo) {
        if (hi.a > lo.a && hi.b < lo.b) {
            const Rational limit = (hi.a - lo.a) / (lo.b - hi.b);
            if (limit < delta) delta = limit;
        }
    };
    for (std::size_t v = 0; v < value_.size(); ++v) {
        if (lower_[v]) tighten(value_[v], *lower_[v]);
        if (upper_[v]) tighten(*upper_[v], value_[v]);
    }
    return delta;
}

std::vector<Rational> Simplex::structural_values() const {
    const Rational delta = concrete_delta();
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(structural_));
    for (int j = 0; j < structural_; ++j) {
        const auto& v = value_[static_cast<std::size_t>(j)];
        out.push_back(v.a + v.b * delta);
    }
    return out;
}

void LinearSystem::add(std::vector<Rational> coeff, Sense sense, Rational rhs) {
    if (static_cast<int>(coeff.size()) != variables) throw std::invalid_argument("constraint width mismatch");
    constraints.push_back({std::move(coeff), sense, std::move(rhs)});
}

LpResult lp_feasible(const LinearSystem& system) {
    LpResult result;
    if (system.variables < 1) {
        // Only constant constraints: 0 (sense) rhs.
        result.feasible = true;
        for (std::size_t k = 0; k < system.constraints.size(); ++k) {
            const auto& c = system.constraints[k];
            const bool le_ok = 0 <= c.rhs;
            const bool ge_ok = 0 >= c.rhs;
            if (c.sense != Sense::GreaterEqual && !le_ok) {
                result.feasible = false;
                result.farkas = {{k, true, Rational(1)}};
                return result;
            }
            if (c.sense != Sense::LessEqual && !ge_ok) {
                result.feasible = false;
                result.farkas = {{k, false, Rational(1)}};
                return result;
            }
        }
        return result;
    }

    Simplex lp(system.variables);
    std::vector<int> slack;
    slack.reserve(system.constraints.size());
    for (const auto& c : system.constraints) {
        const int s = lp.add_row(c.coeff);
        if (c.sense != Sense::GreaterEqual) lp.set_upper(s, c.rhs);
        if (c.sense != Sense::LessEqual) lp.set_lower(s, c.rhs);
        slack.push_back(s);
    }
    result.feasible = lp.check();
    if (result.feasible) {
        result.point = lp.structural_values();
        return result;
    }
    // Structural variables are free, so every conflict term refers to a slack.
    for (const auto& term : lp.conflict()) {
        const auto k = static_cast<std::size_t>(term.var - system.variables);
        result.farkas.push_back({k, term.upper, term.multiplier});
    }
    return result;
}

bool verify_farkas(const LinearSystem& system, const std::vector<FarkasTerm>& farkas) {
    std::vector<Rational> lhs(static_cast<std::size_t>(system.variables));
    Rational rhs = 0;
    for (const auto& term : farkas) {
        if (term.index >= system.constraints.size() || term.multiplier < 0) return false;
        const auto& c = system.constraints[term.index];
        if (term.upper && c.sense == Sense::GreaterEqual) return false;
        if (!term.upper && c.sense == Sense::LessEqual) return false;
        const Rational w = term.upper ? term.multiplier : Rational(-term.multiplier);
        for (std::size_t j = 0; j < lhs.size(); ++j) lhs[j] += w * c.coeff[j];
        rhs += w * c.rhs;
    }
    for (const auto& v : lhs) {
        if (v != 0) return false;
    }
    return rhs < 0;
}

}  // namespace hk
