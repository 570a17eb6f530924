#include "hk/solver.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>
#include <thread>

namespace hk {

std::vector<PairBound> consistency_pairs(const OrderedUIGraph& g) {
    const int n = g.size();
    std::vector<PairBound> pairs;
    for (int i = 1; i <= n; ++i) {
        const int r = g.rightmost(i);
        if (r > i && (i == 1 || r > g.rightmost(i - 1))) pairs.push_back({i, r, true});
        if (r < n && g.rightmost(i + 1) > r) pairs.push_back({i, r + 1, false});
    }
    return pairs;
}

LinearMap identity_map(int n) {
    LinearMap m(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = 1;
    return m;
}

LinearMap apply_averaging(const OrderedUIGraph& g, const LinearMap& map) {
    const auto n = static_cast<std::size_t>(g.size());
    const std::size_t cols = map.empty() ? 0 : map.front().size();
    // prefix[k] = sum of rows 0..k-1
    std::vector<std::vector<Rational>> prefix(n + 1, std::vector<Rational>(cols));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < cols; ++c) prefix[k + 1][c] = prefix[k][c] + map[k][c];
    }
    LinearMap out(n, std::vector<Rational>(cols));
    for (int i = 1; i <= g.size(); ++i) {
        const auto [l, r] = g.neighborhood(i);
        const Rational inv(1, r - l + 1);
        auto& row = out[static_cast<std::size_t>(i - 1)];
        for (std::size_t c = 0; c < cols; ++c) {
            row[c] = (prefix[static_cast<std::size_t>(r)][c] - prefix[static_cast<std::size_t>(l - 1)][c]) * inv;
        }
    }
    return out;
}

namespace {

void add_box_and_order(Simplex& lp, int n) {
    for (int j = 0; j < n; ++j) {
        lp.set_lower(j, 0);
        lp.set_upper(j, n);
    }
    std::vector<Rational> row(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
        std::fill(row.begin(), row.end(), Rational(0));
        row[static_cast<std::size_t>(i + 1)] = 1;
        row[static_cast<std::size_t>(i)] = -1;
        lp.set_lower(lp.add_row(row), 0);
    }
}

void add_consistency_rows(Simplex& lp, const OrderedUIGraph& g, const LinearMap& map, const Rational& eps,
                          bool strict_nonedges) {
    const std::size_t n = map.size();
    std::vector<Rational> row(n);
    for (const auto& pb : consistency_pairs(g)) {
        const auto& hi = map[static_cast<std::size_t>(pb.j - 1)];
        const auto& lo = map[static_cast<std::size_t>(pb.i - 1)];
        for (std::size_t c = 0; c < n; ++c) row[c] = hi[c] - lo[c];
        const int s = lp.add_row(row);
        if (pb.edge) {
            lp.set_upper(s, 1 + eps);
        } else {
            lp.set_lower(s, 1 - eps, strict_nonedges);
        }
    }
}

}  // namespace

LinearSystem consistency_system(const OrderedUIGraph& g, const Rational& eps) {
    const int n = g.size();
    LinearSystem sys{n, {}};
    auto unit = [n](int j, int sign) {
        std::vector<Rational> v(static_cast<std::size_t>(n));
        v[static_cast<std::size_t>(j)] = sign;
        return v;
    };
    for (int j = 0; j < n; ++j) {
        sys.add(unit(j, 1), Sense::GreaterEqual, 0);
        sys.add(unit(j, 1), Sense::LessEqual, n);
    }
    for (int i = 1; i < n; ++i) {
        auto v = unit(i, 1);
        v[static_cast<std::size_t>(i - 1)] = -1;
        sys.add(std::move(v), Sense::GreaterEqual, 0);
    }
    for (const auto& pb : consistency_pairs(g)) {
        auto v = unit(pb.j - 1, 1);
        v[static_cast<std::size_t>(pb.i - 1)] = -1;
        if (pb.edge) {
            sys.add(std::move(v), Sense::LessEqual, 1 + eps);
        } else {
            sys.add(std::move(v), Sense::GreaterEqual, 1 - eps);
        }
    }
    return sys;
}

std::optional<OpinionProfile> realize(const OrderedUIGraph& g, const Rational& eps) {
    const auto res = lp_feasible(consistency_system(g, eps));
    if (!res.feasible) return std::nullopt;
    return OpinionProfile(res.point);
}

nlohmann::json to_json(const Certificate& c) {
    nlohmann::json witness = nlohmann::json::array();
    for (const auto& v : c.witness.values()) witness.push_back(to_string(v));
    nlohmann::json graphs = nlohmann::json::array();
    for (const auto& g : c.graphs) graphs.push_back(g.rightmost());
    nlohmann::json doc{{"witness", witness}, {"graphs", graphs}, {"eps", to_string(c.eps)}, {"T", c.horizon}};
    if (c.strict_nonedges) doc["strict_nonedges"] = true;
    return doc;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    try {
        std::vector<Rational> w;
        for (const auto& s : j.at("witness")) w.push_back(parse_rational(s.get<std::string>()));
        std::vector<OrderedUIGraph> graphs;
        for (const auto& r : j.at("graphs")) graphs.emplace_back(r.get<std::vector<int>>());
        return Certificate{OpinionProfile(std::move(w)), std::move(graphs),
                           parse_rational(j.at("eps").get<std::string>()), j.at("T").get<int>(),
                           j.value("strict_nonedges", false)};
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("certificate JSON: ") + e.what());
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Feasible: return "Feasible";
        case Verdict::Infeasible: return "Infeasible";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

SearchStats& SearchStats::operator+=(const SearchStats& o) {
    lp_calls += o.lp_calls;
    pruned += o.pruned;
    feasible_leaves += o.feasible_leaves;
    pivots += o.pivots;
    sequences_accounted += o.sequences_accounted;
    return *this;
}

BigInt sequence_count(int n, int horizon) {
    const BigInt c = connected_graph_count(n);
    BigInt inner;
    mpz_pow_ui(inner.get_mpz_t(), BigInt(c - 1).get_mpz_t(), static_cast<unsigned long>(horizon));
    return inner * c;
}

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

enum class Status { Done, Found, OutOfBudget, Cancelled };

struct SharedState {
    std::atomic<std::uint64_t> lp_calls{0};
    std::atomic<std::size_t> first_found{kNone};
};

class Subtree {
public:
    Subtree(int n, int horizon, const Rational& eps, const std::vector<OrderedUIGraph>& graphs,
            const SearchOptions& options, SharedState& shared, std::size_t task)
        : n_(n), horizon_(horizon), eps_(eps), graphs_(graphs), options_(options), shared_(shared), task_(task) {
        BigInt per = 1;
        // below_[t]: full sequences sharing a prefix that ends at depth t.
        below_.assign(static_cast<std::size_t>(horizon) + 1, BigInt(1));
        for (int t = horizon - 1; t >= 0; --t) {
            const BigInt width = t + 1 == horizon ? BigInt(graphs.size()) : BigInt(graphs.size() - 1);
            below_[static_cast<std::size_t>(t)] = below_[static_cast<std::size_t>(t + 1)] * width;
        }
    }

    // Explores the subtree whose depth-0 graph is graphs_[task_].
    Status run(const Simplex& root) {
        return visit(0, task_, root, identity_map(n_));
    }

    SearchStats stats;
    std::optional<Certificate> certificate;

private:
    Status visit(int t, std::size_t g, const Simplex& parent, const LinearMap& map) {
        if (!options_.exhaustive && shared_.first_found.load() < task_) return Status::Cancelled;
        if (shared_.lp_calls.fetch_add(1) >= options_.budget) return Status::OutOfBudget;
        ++stats.lp_calls;

        Simplex lp = parent;
        const auto pivots_before = lp.pivot_count();
        add_consistency_rows(lp, graphs_[g], map, eps_, options_.strict_nonedges);
        const bool leaf = t == horizon_;
        bool feasible = true;
        if (options_.prune || leaf) feasible = lp.check();
        stats.pivots += lp.pivot_count() - pivots_before;
        if (!feasible) {
            ++stats.pruned;
            stats.sequences_accounted += below_[static_cast<std::size_t>(t)];
            return Status::Done;
        }
        prefix_.push_back(g);
        if (leaf) {
            ++stats.feasible_leaves;
            stats.sequences_accounted += 1;
            if (!certificate) {
                std::vector<OrderedUIGraph> seq;
                for (auto idx : prefix_) seq.push_back(graphs_[idx]);
                certificate = Certificate{OpinionProfile(lp.structural_values()), std::move(seq), eps_, horizon_,
                                          options_.strict_nonedges};
            }
            prefix_.pop_back();
            return options_.exhaustive ? Status::Done : Status::Found;
        }
        const LinearMap next = apply_averaging(graphs_[g], map);
        const std::size_t children = t + 1 == horizon_ ? graphs_.size() : graphs_.size() - 1;
        Status result = Status::Done;
        for (std::size_t c = 0; c < children; ++c) {
            const Status s = visit(t + 1, c, lp, next);
            if (s != Status::Done) {
                result = s;
                break;
            }
        }
        prefix_.pop_back();
        return result;
    }

    int n_;
    int horizon_;
    const Rational& eps_;
    const std::vector<OrderedUIGraph>& graphs_;
    const SearchOptions& options_;
    SharedState& shared_;
    std::size_t task_;
    std::vector<BigInt> below_;
    std::vector<std::size_t> prefix_;
};

}  // namespace

FeasOutcome search_sequence(int n, int horizon, const Rational& eps, const SearchOptions& options) {
    if (n < 2) throw DomainError("search needs n >= 2");
    if (horizon < 1) throw DomainError("search needs T >= 1");
    const auto graphs = enumerate_connected(n, options.enumeration_limit);

    Simplex root(n);
    add_box_and_order(root, n);
    root.check();

    // Depth-0 graphs exclude the complete graph, which is last in canonical order.
    const std::size_t tasks = graphs.size() - 1;
    SharedState shared;
    std::vector<Status> status(tasks, Status::Done);
    std::vector<std::optional<Subtree>> trees(tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < tasks; k = next++) {
            trees[k].emplace(n, horizon, eps, graphs, options, shared, k);
            status[k] = trees[k]->run(root);
            if (status[k] == Status::Found) {
                std::size_t cur = shared.first_found.load();
                while (k < cur && !shared.first_found.compare_exchange_weak(cur, k)) {
                }
            }
        }
    };
    const int threads = std::clamp(options.jobs, 1, std::max<int>(1, static_cast<int>(tasks)));
    {
        std::vector<std::jthread> pool;
        for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }

    FeasOutcome out;
    bool budget_hit = false;
    for (std::size_t k = 0; k < tasks; ++k) {
        out.stats += trees[k]->stats;
        if (status[k] == Status::OutOfBudget) budget_hit = true;
        if (!out.certificate && trees[k]->certificate) out.certificate = trees[k]->certificate;
    }
    if (out.certificate) {
        if (const auto r = replay_certificate(*out.certificate); !r.ok) {
            throw std::logic_error("search produced a certificate that fails replay: " + r.diagnostic);
        }
        out.verdict = Verdict::Feasible;
    } else {
        out.verdict = budget_hit ? Verdict::Undecided : Verdict::Infeasible;
    }
    return out;
}

FBounds f_bounds(int n, int t_max, const FBoundsOptions& options) {
    if (n < 1) throw DomainError("f(n) needs n >= 1");
    if (options.strict_eps >= 0) throw DomainError("lower-bound runs need eps < 0");
    FBounds out;
    out.n = n;
    if (n == 1) {
        out.upper = 0;
        return out;
    }
    // Agents at 0 except the last at 1/2: neither consensus nor split at t = 0.
    out.lower = 1;
    SearchOptions exact = options.search;
    exact.strict_nonedges = true;
    for (int T = 1; T <= t_max && !out.upper; ++T) {
        FStep step;
        step.horizon = T;
        if (out.lower <= T) {
            auto margin = search_sequence(n, T, options.strict_eps, options.search);
            step.margin = margin.verdict;
            step.stats += margin.stats;
            if (margin.verdict == Verdict::Feasible) {
                out.lower = T + 1;
                out.certificate = std::move(margin.certificate);
                out.steps.push_back(std::move(step));
                continue;
            }
        }
        auto decided = search_sequence(n, T, Rational(0), exact);
        step.exact = decided.verdict;
        step.stats += decided.stats;
        if (decided.verdict == Verdict::Infeasible) {
            out.upper = T;
        } else if (decided.verdict == Verdict::Feasible && out.lower <= T) {
            out.lower = T + 1;
            out.certificate = std::move(decided.certificate);
        }
        out.steps.push_back(std::move(step));
    }
    return out;
}

ReplayResult replay_certificate(const Certificate& c) {
    const int n = c.witness.size();
    const int T = c.horizon;
    auto fail = [](std::string msg) { return ReplayResult{false, std::move(msg)}; };
    if (T < 0 || static_cast<int>(c.graphs.size()) != T + 1) return fail("graph sequence length is not T + 1");
    if (c.witness.at(1) < 0 || c.witness.at(n) > n) return fail("witness leaves [0, n]");
    for (int t = 0; t <= T; ++t) {
        const auto& g = c.graphs[static_cast<std::size_t>(t)];
        if (g.size() != n) return fail("graph at t = " + std::to_string(t) + " has wrong size");
        if (!g.is_connected()) return fail("graph at t = " + std::to_string(t) + " is disconnected");
        if (t < T && g.is_complete()) return fail("complete graph before the horizon at t = " + std::to_string(t));
    }
    OpinionProfile x = c.witness;
    for (int t = 0; t <= T; ++t) {
        const auto& g = c.graphs[static_cast<std::size_t>(t)];
        if (!consistent(g, x, c.eps) || (c.strict_nonedges && c.eps == 0 && influence_graph(x) != g)) {
            return fail("t = " + std::to_string(t) + ": profile " + to_string(x) + " realizes " +
                        to_string(influence_graph(x)) + ", not consistent with " + to_string(g) + " at eps " +
                        to_string(c.eps));
        }
        if ((c.eps < 0 || c.strict_nonedges) && (is_consensus(x) || has_split(x))) {
            return fail("t = " + std::to_string(t) + ": consensus or split before T + 1");
        }
        if (t < T) x = step(x);
    }
    return {true, {}};
}

}  // namespace hk
