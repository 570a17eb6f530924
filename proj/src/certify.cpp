#include "hk/certify.hpp"

#include "hk/configs.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <thread>

namespace hk {

std::string to_string(LemmaVariant v) { return v == LemmaVariant::AsPrinted ? "as-printed" : "shifted"; }

LemmaVariant parse_lemma_variant(const std::string& text) {
    if (text == "as-printed" || text == "printed") return LemmaVariant::AsPrinted;
    if (text == "shifted") return LemmaVariant::Shifted;
    throw DomainError("unknown lemma variant '" + text + "' (expected as-printed or shifted)");
}

bool LemmaReport::verdict() const { return failures() == 0; }

std::size_t LemmaReport::failures(bool include_informational) const {
    return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [&](const LemmaCheck& c) {
        return !c.pass && (include_informational || !c.informational);
    }));
}

std::optional<LemmaCheck> LemmaReport::base_case_failure() const {
    for (const auto& c : checks) {
        if (c.t == 0 && !c.pass && !c.informational) return c;
    }
    return std::nullopt;
}

namespace {

std::string interval_string(std::pair<int, int> range) {
    return "{" + std::to_string(range.first) + ".." + std::to_string(range.second) + "}";
}

class CheckSink {
public:
    CheckSink(std::vector<LemmaCheck>& out, long t) : out_(out), t_(t) {}

    // lo <= value
    void at_least(const std::string& name, const Rational& value, const Rational& lo, bool info = false) {
        out_.push_back({t_, name, ">= " + to_string(lo), to_string(value), value >= lo, info});
    }
    // value <= hi
    void at_most(const std::string& name, const Rational& value, const Rational& hi, bool info = false) {
        out_.push_back({t_, name, "<= " + to_string(hi), to_string(value), value <= hi, info});
    }
    void equal(const std::string& name, const std::string& expected, const std::string& actual) {
        out_.push_back({t_, name, expected, actual, expected == actual, false});
    }

private:
    std::vector<LemmaCheck>& out_;
    long t_;
};

}  // namespace

LemmaReport verify_lemma(int k, LemmaVariant variant) {
    if (k < 4) throw DomainError("lemma requires k >= 4, got " + std::to_string(k));
    const LowerBoundParams params{k};
    const int n = params.agents();
    const LemmaBounds bounds{variant};

    LemmaReport report;
    report.k = k;
    report.variant = variant;
    report.t_max = k / 3;

    const Rational inv_k(1, k);
    const Rational k2 = Rational(k) * k;
    const Rational k3 = k2 * k;

    OpinionProfile x = lower_bound_config(params);
    for (long t = 0; t <= report.t_max; ++t) {
        CheckSink sink(report.checks, t);
        const Rational a = Rational(bounds.a(t)) / k2;
        const Rational b = Rational(bounds.b(t)) / k3;
        const Rational c = Rational(bounds.c(t)) / k2;
        const Rational& x1 = x.at(params.j1());
        const Rational& x2 = x.at(params.j2());
        const Rational& x3 = x.at(params.j3());
        const Rational& x4 = x.at(params.j4());

        const Rational e1 = x1 + inv_k - a;
        sink.at_least("chain1.lower", e1, -b);
        sink.at_most("chain1.upper", e1, 0);
        sink.at_least("chain2.lower", x2, 0);
        sink.at_most("chain2.upper", x2, c);
        sink.at_least("chain3.lower", x3, 1 - c);
        sink.at_most("chain3.upper", x3, 1);
        // Mirror image of chain 1 under x -> 1 - x.
        const Rational e4 = x4 - 1 - inv_k + a;
        sink.at_least("chain4.lower", e4, 0);
        sink.at_most("chain4.upper", e4, b);
        // Literal "- 1 + 1/k" form; it evaluates to 2/k - a_t/k^2 at t = 0.
        const Rational e4_literal = x4 - 1 + inv_k - a;
        sink.at_least("chain4_literal.lower", e4_literal, 0, true);
        sink.at_most("chain4_literal.upper", e4_literal, b, true);

        sink.equal("nbhd.j1", interval_string({1, params.j2()}), interval_string(neighbor_interval(x, params.j1())));
        sink.equal("nbhd.j2", interval_string({1, params.j3()}), interval_string(neighbor_interval(x, params.j2())));
        sink.equal("nbhd.j3", interval_string({params.j2(), n}), interval_string(neighbor_interval(x, params.j3())));
        sink.equal("nbhd.j4", interval_string({params.j3(), n}), interval_string(neighbor_interval(x, params.j4())));
        sink.equal("weight.j1", std::to_string(k), std::to_string(weight_at(x, params.j1())));
        sink.equal("weight.j4", std::to_string(k), std::to_string(weight_at(x, params.j4())));

        sink.equal("symmetry.j2j3", "1", to_string(Rational(x2 + x3)));
        bool mirrored = true;
        for (int i = 1; i <= n && mirrored; ++i) mirrored = x.at(i) + x.at(n + 1 - i) == 1;
        sink.equal("symmetry.mirror", "all", mirrored ? "all" : "broken");

        if (t < report.t_max) x = step(x);
    }
    return report;
}

void write_lemma_csv(std::ostream& out, const LemmaReport& report) {
    out << "k,t,check,expected,actual,result\n";
    for (const auto& c : report.checks) {
        out << report.k << ',' << c.t << ',' << c.name << ',' << c.expected << ',' << c.actual << ','
            << (c.pass ? "pass" : (c.informational ? "fail(info)" : "fail")) << '\n';
    }
}

int formula_correction(long n) {
    // sqrt(3) sin(2 pi m / 3), cos(pi m / 3) and (-1)^n for m = n - 1, all
    // rational on this grid of angles.
    static constexpr int kSqrt3SinTimes2[3] = {0, 3, -3};
    static constexpr int kCosTimes2[6] = {2, 1, -1, -2, -1, 1};
    const long m = n - 1;
    const int s = kSqrt3SinTimes2[((m % 3) + 3) % 3];
    const int c = kCosTimes2[((m % 6) + 6) % 6];
    const int sign = (n % 2 == 0) ? 2 : -2;
    const Rational value = make_rational(s - c - sign, 6);
    if (value.get_den() != 1) throw std::logic_error("correction term is not an integer");
    return static_cast<int>(value.get_num().get_si());
}

long equidistant_formula(long n) {
    if (n < 2) throw DomainError("closed form is stated for n >= 2");
    return 1 + 5 * ((n + 2) / 6) + formula_correction(n);
}

std::vector<EquidistantRow> equidistant_report(long n_lo, long n_hi, int jobs) {
    if (n_lo < 2 || n_hi < n_lo) throw DomainError("equidistant report needs 2 <= from <= to");
    std::vector<EquidistantRow> rows(static_cast<std::size_t>(n_hi - n_lo + 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx = next++; idx < rows.size(); idx = next++) {
            EquidistantRow& row = rows[idx];
            row.n = n_lo + static_cast<long>(idx);
            row.formula = equidistant_formula(row.n);
            const auto traj = simulate(equidistant(static_cast<int>(row.n)));
            const auto& term = traj.termination;
            row.outcome = to_string(term);
            if (term.fixed_point) {
                row.simulated = *term.fixed_point;
                row.match = static_cast<long>(*row.simulated) == row.formula;
                row.ratio = make_rational(static_cast<long>(*row.simulated), row.n);
            }
        }
    };
    const int threads = std::clamp(jobs, 1, static_cast<int>(rows.size()));
    std::vector<std::jthread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    return rows;
}

void write_equidistant_csv(std::ostream& out, const std::vector<EquidistantRow>& rows, bool approx) {
    out << "n,simulated,formula,match,ratio,outcome" << (approx ? ",ratio_approx" : "") << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << (r.simulated ? std::to_string(*r.simulated) : "cap") << ',' << r.formula << ','
            << (r.match ? "match" : "mismatch") << ',' << to_string(r.ratio) << ',' << r.outcome;
        if (approx) out << ',' << to_decimal_string(r.ratio, 6);
        out << '\n';
    }
}

}  // namespace hk
