#include "hk/configs.hpp"
#include "hk/solver.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

using hk::Rational;
using hk::Verdict;

namespace {

const Rational kMargin(-1, 1000);

}  // namespace

TEST_CASE("reduced consistency pairs match the full check") {
    for (int n = 2; n <= 5; ++n) {
        for (const auto& g : hk::enumerate_connected(n)) {
            const auto pairs = hk::consistency_pairs(g);
            // Each kept pair agrees with the graph.
            for (const auto& pb : pairs) CHECK(g.has_edge(pb.i, pb.j) == pb.edge);
            // The realized profile of the reduced system is consistent in full.
            const auto p = hk::realize(g, Rational(-1, 10));
            REQUIRE(p);
            CHECK(hk::consistent(g, *p, Rational(-1, 10)));
        }
    }
}

TEST_CASE("averaging map matches the update rule") {
    const hk::OpinionProfile p({0, Rational(1, 2), Rational(7, 5), 2, Rational(5, 2)});
    auto map = hk::identity_map(5);
    auto x = p;
    for (int t = 0; t < 4; ++t) {
        map = hk::apply_averaging(hk::influence_graph(x), map);
        x = hk::step(x);
        for (int i = 0; i < 5; ++i) {
            Rational v = 0;
            for (int j = 0; j < 5; ++j) v += map[i][j] * p.values()[j];
            CHECK(v == x.values()[i]);
        }
    }
}

TEST_CASE("small instances") {
    CHECK(hk::search_sequence(2, 1, 0).verdict == Verdict::Infeasible);
    CHECK(hk::search_sequence(2, 1, Rational(-1, 2)).verdict == Verdict::Infeasible);
    const auto r = hk::search_sequence(3, 1, Rational(-1, 100));
    REQUIRE(r.verdict == Verdict::Feasible);
    REQUIRE(r.certificate);
    CHECK(hk::replay_certificate(*r.certificate).ok);
    CHECK(hk::f_of(r.certificate->witness) >= 2);
    CHECK_THROWS_AS(hk::search_sequence(1, 1, 0), hk::DomainError);
    CHECK_THROWS_AS(hk::search_sequence(3, 0, 0), hk::DomainError);
}

TEST_CASE("closed and exact semantics differ at a gap of one") {
    // Closed rows accept x0 = (0, 1, 2): at t = 1 agents 1 and 3 are exactly 1 apart.
    const auto closed = hk::search_sequence(3, 2, 0);
    REQUIRE(closed.verdict == Verdict::Feasible);
    CHECK(closed.certificate->witness == hk::OpinionProfile({0, 1, 2}));
    CHECK(hk::f_of(closed.certificate->witness) == 2);
    hk::SearchOptions exact;
    exact.strict_nonedges = true;
    CHECK(hk::search_sequence(3, 2, 0, exact).verdict == Verdict::Infeasible);
    CHECK(hk::search_sequence(3, 2, kMargin).verdict == Verdict::Infeasible);
}

TEST_CASE("exhaustive search accounts for every sequence") {
    for (int n = 2; n <= 3; ++n) {
        for (int T = 1; T <= 3; ++T) {
            for (bool prune : {true, false}) {
                CAPTURE(n);
                CAPTURE(T);
                CAPTURE(prune);
                hk::SearchOptions opt;
                opt.exhaustive = true;
                opt.prune = prune;
                const auto r = hk::search_sequence(n, T, 0, opt);
                CHECK(r.stats.sequences_accounted == hk::sequence_count(n, T));
            }
        }
    }
    CHECK(hk::sequence_count(3, 2) == 2);
    CHECK(hk::sequence_count(4, 2) == 80);
}

TEST_CASE("f bounds for small n") {
    const long expected[] = {0, 1, 2, 5};
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        const auto b = hk::f_bounds(n, n * n);
        REQUIRE(b.exact());
        CHECK(b.lower == expected[n - 1]);
        if (b.certificate) {
            CHECK(hk::replay_certificate(*b.certificate).ok);
            CHECK(static_cast<long>(hk::f_of(b.certificate->witness)) >= b.lower);
        }
    }
}

TEST_CASE("budget exhaustion is undecided") {
    hk::SearchOptions opt;
    opt.budget = 5;
    const auto r = hk::search_sequence(4, 5, 0, opt);
    CHECK(r.verdict == Verdict::Undecided);
    hk::FBoundsOptions fo;
    fo.search.budget = 5;
    const auto b = hk::f_bounds(4, 16, fo);
    CHECK_FALSE(b.upper.has_value());
}

TEST_CASE("certificates replay and tampering is detected") {
    for (int n = 3; n <= 4; ++n) {
        for (int T = 1; T < (n == 3 ? 2 : 5); ++T) {
            const auto r = hk::search_sequence(n, T, kMargin);
            REQUIRE(r.verdict == Verdict::Feasible);
            auto c = *r.certificate;
            CHECK(hk::replay_certificate(c).ok);
            // A margin certificate also satisfies the closed rows.
            auto relaxed = c;
            relaxed.eps = 0;
            CHECK(hk::replay_certificate(relaxed).ok);
            std::vector<Rational> w(c.witness.values().begin(), c.witness.values().end());
            w.back() += 2;
            c.witness = hk::OpinionProfile(w);
            const auto bad = hk::replay_certificate(c);
            CHECK_FALSE(bad.ok);
            CHECK_FALSE(bad.diagnostic.empty());
        }
    }
}

TEST_CASE("certificate json round trip") {
    const auto r = hk::search_sequence(4, 3, kMargin);
    REQUIRE(r.certificate);
    const auto j = hk::to_json(*r.certificate);
    CHECK(j.at("T") == 3);
    CHECK(j.at("eps") == "-1/1000");
    CHECK_FALSE(j.contains("strict_nonedges"));
    const auto back = hk::certificate_from_json(j);
    CHECK(back.witness == r.certificate->witness);
    CHECK(back.graphs == r.certificate->graphs);
    CHECK(hk::replay_certificate(back).ok);
    CHECK_THROWS_AS(hk::certificate_from_json(nlohmann::json::object()), hk::DomainError);
}

TEST_CASE("results do not depend on the job count") {
    for (int T = 1; T <= 5; ++T) {
        hk::SearchOptions one, four;
        four.jobs = 4;
        const auto a = hk::search_sequence(4, T, kMargin, one);
        const auto b = hk::search_sequence(4, T, kMargin, four);
        CHECK(a.verdict == b.verdict);
        if (a.certificate && b.certificate) {
            CHECK(hk::to_json(*a.certificate) == hk::to_json(*b.certificate));
        }
        const auto c = hk::search_sequence(4, T, kMargin, one);
        CHECK(a.stats.lp_calls == c.stats.lp_calls);
    }
}

TEST_CASE("grid of initial profiles never beats the upper bound") {
    // All sorted profiles on the grid {0, 1/4, ..., n} for n <= 4.
    for (int n = 2; n <= 4; ++n) {
        const long upper = *hk::f_bounds(n, n * n).upper;
        const int steps = 4 * n;
        std::vector<int> idx(static_cast<std::size_t>(n), 0);
        long best = 0;
        while (true) {
            std::vector<Rational> v;
            for (int k : idx) v.push_back(hk::make_rational(k, 4));
            best = std::max(best, static_cast<long>(hk::f_of(hk::OpinionProfile(v))));
            int pos = n - 1;
            while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == steps) --pos;
            if (pos < 0) break;
            const int next = idx[static_cast<std::size_t>(pos)] + 1;
            for (int k = pos; k < n; ++k) idx[static_cast<std::size_t>(k)] = next;
        }
        CAPTURE(n);
        CHECK(best <= upper);
    }
}
