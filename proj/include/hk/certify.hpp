#pragma once

// Machine checks of the lower-bound construction and of the closed-form
// convergence time claimed for equidistant configurations.

#include "hk/dynamics.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hk {

/// Indexing of the a_t sequence: AsPrinted uses a_t = t + 1, Shifted uses a_t = t.
enum class LemmaVariant { AsPrinted, Shifted };

std::string to_string(LemmaVariant v);
LemmaVariant parse_lemma_variant(const std::string& text);

struct LemmaBounds {
    LemmaVariant variant = LemmaVariant::Shifted;

    BigInt a(long t) const { return variant == LemmaVariant::AsPrinted ? BigInt(t + 1) : BigInt(t); }
    BigInt b(long t) const { return BigInt((t + 1) * (t + 2) / 2); }
    BigInt c(long t) const { return BigInt(t); }
};

struct LemmaCheck {
    long t = 0;
    std::string name;      // e.g. "chain1.lower", "nbhd.j2", "symmetry.j2j3"
    std::string expected;  // human-readable bound or expected set
    std::string actual;    // exact value as p/q, or the observed set
    bool pass = false;
    /// Informational rows do not enter the verdict (the literal form of
    /// chain (iv), which is the mirror of chain (i) with a sign slip).
    bool informational = false;
};

struct LemmaReport {
    int k = 0;
    LemmaVariant variant = LemmaVariant::Shifted;
    long t_max = 0;  // floor(k / 3)
    std::vector<LemmaCheck> checks;

    bool verdict() const;
    /// First failing non-informational check at t = 0, if any.
    std::optional<LemmaCheck> base_case_failure() const;
    std::size_t failures(bool include_informational = false) const;
};

/// Simulates the lower-bound configuration for floor(k/3) steps and checks the
/// four inequality chains, the four neighborhood claims, the x_j2 + x_j3 = 1
/// identity and the full mirror symmetry at every step.
LemmaReport verify_lemma(int k, LemmaVariant variant);

/// CSV columns: k,t,check,expected,actual,result.
void write_lemma_csv(std::ostream& out, const LemmaReport& report);

/// Integer value of the trigonometric correction term of the closed form,
/// evaluated exactly from a period-6 table.
int formula_correction(long n);

/// 1 + 5 floor((n + 2) / 6) + correction(n), for n >= 2.
long equidistant_formula(long n);

struct EquidistantRow {
    long n = 0;
    std::optional<std::size_t> simulated;  // empty when the cap binds
    long formula = 0;
    bool match = false;
    std::string outcome;  // termination summary of the simulation
    Rational ratio;       // simulated / n (0 when cap binds)
};

/// One row per n in [n_lo, n_hi], in increasing n.
std::vector<EquidistantRow> equidistant_report(long n_lo, long n_hi, int jobs = 1);

/// CSV columns: n,simulated,formula,match,ratio,outcome (+ ratio_approx when requested).
void write_equidistant_csv(std::ostream& out, const std::vector<EquidistantRow>& rows, bool approx = false);

}  // namespace hk
