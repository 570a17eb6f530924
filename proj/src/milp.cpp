#include "hk/milp.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace hk {

std::string variable_name(const VarKey& key) {
    switch (key.kind) {
        case VarKind::X: return "x_" + std::to_string(key.t) + "_" + std::to_string(key.i);
        case VarKind::U: return "u_" + std::to_string(key.t) + "_" + std::to_string(key.g);
        case VarKind::Z:
            return "z_" + std::to_string(key.t) + "_" + std::to_string(key.i) + "_" + std::to_string(key.g);
    }
    return {};
}

std::string to_string(Family f) {
    switch (f) {
        case Family::Edge: return "edge";
        case Family::NonEdge: return "nonedge";
        case Family::Selection: return "selection";
        case Family::Exclusion: return "exclusion";
        case Family::Dynamics: return "dynamics";
        case Family::McCormickUpperU: return "mccormick_u";
        case Family::McCormickLowerX: return "mccormick_lx";
        case Family::McCormickUpperX: return "mccormick_ux";
        case Family::Ordering: return "ordering";
        case Family::FixOrigin: return "fix_origin";
    }
    return "?";
}

int BlpModel::index(const VarKey& key) const {
    const int c = static_cast<int>(graphs.size());
    const int x_count = (horizon + 1) * n;
    const int u_count = (horizon + 1) * c;
    switch (key.kind) {
        case VarKind::X: return key.t * n + (key.i - 1);
        case VarKind::U: return x_count + key.t * c + key.g;
        case VarKind::Z: return x_count + u_count + (key.t * c + key.g) * n + (key.i - 1);
    }
    return -1;
}

namespace {

std::string join(std::initializer_list<int> parts) {
    std::string s;
    for (int p : parts) s += "_" + std::to_string(p);
    return s;
}

}  // namespace

BlpModel build_blp(int n, int horizon, const Rational& eps, const BlpOptions& options) {
    if (n < 2) throw DomainError("program needs n >= 2");
    if (horizon < 1) throw DomainError("program needs T >= 1");
    BlpModel m;
    m.n = n;
    m.horizon = horizon;
    m.eps = eps;
    m.options = options;
    m.graphs = enumerate_connected(n, options.enumeration_limit);
    const int C = static_cast<int>(m.graphs.size());
    const int K = static_cast<int>(complete_graph_index(m.graphs));
    const Rational N(n);

    for (int t = 0; t <= horizon; ++t) {
        for (int i = 1; i <= n; ++i) m.variables.push_back({{VarKind::X, t, i, -1}, 0, N, false});
    }
    for (int t = 0; t <= horizon; ++t) {
        for (int g = 0; g < C; ++g) m.variables.push_back({{VarKind::U, t, 0, g}, 0, 1, true});
    }
    for (int t = 0; t < horizon; ++t) {
        for (int g = 0; g < C; ++g) {
            for (int i = 1; i <= n; ++i) m.variables.push_back({{VarKind::Z, t, i, g}, 0, N, false});
        }
    }

    auto X = [&](int t, int i) { return m.index({VarKind::X, t, i, -1}); };
    auto U = [&](int t, int g) { return m.index({VarKind::U, t, 0, g}); };
    auto Z = [&](int t, int i, int g) { return m.index({VarKind::Z, t, i, g}); };
    auto add = [&](Family f, std::string name, std::vector<Term> terms, Sense s, Rational rhs) {
        m.constraints.push_back({f, std::move(name), std::move(terms), s, std::move(rhs)});
    };

    for (int t = 0; t <= horizon; ++t) {
        for (int g = 0; g < C; ++g) {
            const auto& graph = m.graphs[static_cast<std::size_t>(g)];
            for (int i = 1; i <= n; ++i) {
                for (int j = i + 1; j <= n; ++j) {
                    if (graph.has_edge(i, j)) {
                        // x_j - x_i <= 1 + eps + (1 - u) n
                        add(Family::Edge, "e" + join({t, g, i, j}),
                            {{X(t, j), 1}, {X(t, i), -1}, {U(t, g), N}}, Sense::LessEqual, 1 + eps + N);
                    } else {
                        // x_j - x_i >= 1 - eps - (1 - u)(1 - eps)
                        add(Family::NonEdge, "ne" + join({t, g, i, j}),
                            {{X(t, j), 1}, {X(t, i), -1}, {U(t, g), eps - 1}}, Sense::GreaterEqual, 0);
                    }
                }
            }
        }
    }
    for (int t = 0; t <= horizon; ++t) {
        std::vector<Term> terms;
        for (int g = 0; g < C; ++g) terms.push_back({U(t, g), 1});
        add(Family::Selection, "sel" + join({t}), std::move(terms), Sense::Equal, 1);
    }
    for (int t = 0; t < horizon; ++t) {
        add(Family::Exclusion, "excl" + join({t}), {{U(t, K), 1}}, Sense::Equal, 0);
    }
    for (int t = 1; t <= horizon; ++t) {
        for (int i = 1; i <= n; ++i) {
            std::vector<Term> terms{{X(t, i), 1}};
            Rational self_weight = 0;
            for (int g = 0; g < C; ++g) {
                const auto [l, r] = m.graphs[static_cast<std::size_t>(g)].neighborhood(i);
                const Rational w(1, r - l + 1);
                for (int j = l; j <= r; ++j) {
                    if (j == i && options.printed_dynamics) {
                        self_weight += w;
                    } else {
                        terms.push_back({Z(t - 1, j, g), -w});
                    }
                }
            }
            if (options.printed_dynamics) terms.push_back({X(t - 1, i), -self_weight});
            add(Family::Dynamics, "dyn" + join({t, i}), std::move(terms), Sense::Equal, 0);
        }
    }
    for (int t = 0; t < horizon; ++t) {
        for (int g = 0; g < C; ++g) {
            for (int i = 1; i <= n; ++i) {
                add(Family::McCormickUpperU, "mcu" + join({t, i, g}), {{Z(t, i, g), 1}, {U(t, g), -N}},
                    Sense::LessEqual, 0);
                add(Family::McCormickLowerX, "mcl" + join({t, i, g}),
                    {{Z(t, i, g), 1}, {X(t, i), -1}, {U(t, g), -N}}, Sense::GreaterEqual, -N);
                add(Family::McCormickUpperX, "mcx" + join({t, i, g}), {{Z(t, i, g), 1}, {X(t, i), -1}},
                    Sense::LessEqual, 0);
            }
        }
    }
    if (options.ordering) {
        for (int t = 0; t <= horizon; ++t) {
            for (int i = 1; i < n; ++i) {
                add(Family::Ordering, "ord" + join({t, i}), {{X(t, i), 1}, {X(t, i + 1), -1}}, Sense::LessEqual, 0);
            }
        }
    }
    if (options.fix_origin) add(Family::FixOrigin, "origin", {{X(0, 1), 1}}, Sense::Equal, 0);

    for (int g = 0; g < C; ++g) {
        m.objective.push_back({U(horizon, g), Rational(static_cast<long>(m.graphs[static_cast<std::size_t>(g)].edge_count()))});
    }
    return m;
}

ModelStats model_stats(const BlpModel& model) {
    ModelStats s;
    for (const auto& v : model.variables) {
        switch (v.key.kind) {
            case VarKind::X: ++s.x; break;
            case VarKind::U: ++s.u; break;
            case VarKind::Z: ++s.z; break;
        }
        if (v.binary) ++s.binaries;
    }
    for (const auto& c : model.constraints) ++s.constraints[to_string(c.family)];
    s.constraint_total = model.constraints.size();
    return s;
}

namespace {

// Appends " + 3 name" style terms, wrapping long lines.
class LineWriter {
public:
    explicit LineWriter(std::ostream& out) : out_(out) {}

    void term(const BigInt& coeff, const std::string& name) {
        if (coeff == 0) return;
        std::string piece = coeff < 0 ? " - " : (first_ ? " " : " + ");
        const BigInt mag = abs(coeff);
        if (mag != 1) piece += mag.get_str() + " ";
        piece += name;
        emit(piece);
        first_ = false;
    }
    void text(const std::string& s) { emit(s); }
    void end() {
        out_ << '\n';
        width_ = 0;
        first_ = true;
    }

private:
    void emit(const std::string& s) {
        if (width_ + s.size() > 200) {
            out_ << "\n   ";
            width_ = 3;
        }
        out_ << s;
        width_ += s.size();
    }

    std::ostream& out_;
    std::size_t width_ = 0;
    bool first_ = true;
};

const char* sense_text(Sense s) {
    switch (s) {
        case Sense::LessEqual: return "<=";
        case Sense::GreaterEqual: return ">=";
        case Sense::Equal: return "=";
    }
    return "?";
}

}  // namespace

void write_lp(std::ostream& out, const BlpModel& model) {
    std::vector<std::string> names;
    names.reserve(model.variables.size());
    for (const auto& v : model.variables) names.push_back(variable_name(v.key));

    out << "\\ graph-sequence program n=" << model.n << " T=" << model.horizon << " eps=" << to_string(model.eps)
        << " ordering=" << (model.options.ordering ? "on" : "off")
        << " dynamics=" << (model.options.printed_dynamics ? "printed" : "z") << '\n';
    LineWriter w(out);
    out << "Minimize\n";
    w.text(" obj:");
    for (const auto& t : model.objective) w.term(t.coeff.get_num(), names[static_cast<std::size_t>(t.var)]);
    w.end();

    out << "Subject To\n";
    std::vector<Rational> values;
    for (const auto& c : model.constraints) {
        values.clear();
        for (const auto& t : c.terms) values.push_back(t.coeff);
        values.push_back(c.rhs);
        const BigInt scale = common_denominator(values);
        w.text(" " + c.name + ":");
        for (const auto& t : c.terms) {
            const Rational scaled = t.coeff * scale;
            w.term(scaled.get_num(), names[static_cast<std::size_t>(t.var)]);
        }
        const Rational rhs = c.rhs * scale;
        w.text(std::string(" ") + sense_text(c.sense) + " " + rhs.get_num().get_str());
        w.end();
    }

    out << "Bounds\n";
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        const auto& v = model.variables[k];
        if (v.binary) continue;
        out << ' ' << to_string(v.lower) << " <= " << names[k] << " <= " << to_string(v.upper) << '\n';
    }
    out << "Binaries\n";
    for (std::size_t k = 0; k < model.variables.size(); ++k) {
        if (model.variables[k].binary) out << ' ' << names[k] << '\n';
    }
    out << "End\n";
}

nlohmann::json sidecar_json(const BlpModel& model) {
    nlohmann::json vars = nlohmann::json::object();
    for (const auto& v : model.variables) {
        const char* kind = v.key.kind == VarKind::X ? "X" : v.key.kind == VarKind::U ? "U" : "Z";
        nlohmann::json entry{{"kind", kind}, {"t", v.key.t}};
        if (v.key.kind != VarKind::U) entry["i"] = v.key.i;
        if (v.key.kind != VarKind::X) entry["g"] = v.key.g;
        vars[variable_name(v.key)] = entry;
    }
    nlohmann::json graphs = nlohmann::json::array();
    for (const auto& g : model.graphs) graphs.push_back(g.rightmost());
    return nlohmann::json{{"n", model.n}, {"T", model.horizon}, {"eps", to_string(model.eps)},
                          {"graphs", graphs}, {"variables", vars}};
}

void emit_lp(const BlpModel& model, const std::filesystem::path& lp_path, std::filesystem::path sidecar_path) {
    if (sidecar_path.empty()) sidecar_path = lp_path.string() + ".vars.json";
    std::ofstream lp(lp_path);
    if (!lp) throw DomainError("cannot write LP file " + lp_path.string());
    write_lp(lp, model);
    std::ofstream side(sidecar_path);
    if (!side) throw DomainError("cannot write sidecar " + sidecar_path.string());
    side << sidecar_json(model).dump(1) << '\n';
}

std::vector<std::string> violations(const BlpModel& model, const std::vector<Rational>& values) {
    if (values.size() != model.variables.size()) throw DomainError("assignment size does not match the model");
    std::vector<std::string> bad;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto& v = model.variables[k];
        const auto& val = values[k];
        if (val < v.lower || val > v.upper) bad.push_back("bound:" + variable_name(v.key));
        if (v.binary && val != 0 && val != 1) bad.push_back("binary:" + variable_name(v.key));
    }
    for (const auto& c : model.constraints) {
        Rational lhs = 0;
        for (const auto& t : c.terms) lhs += t.coeff * values[static_cast<std::size_t>(t.var)];
        const bool ok = c.sense == Sense::LessEqual ? lhs <= c.rhs
                        : c.sense == Sense::GreaterEqual ? lhs >= c.rhs
                                                         : lhs == c.rhs;
        if (!ok) bad.push_back(c.name);
    }
    return bad;
}

std::vector<Rational> assignment_from_profiles(const BlpModel& model, const std::vector<OpinionProfile>& profiles) {
    if (static_cast<int>(profiles.size()) != model.horizon + 1) throw DomainError("need T + 1 profiles");
    std::vector<Rational> values(model.variables.size());
    for (int t = 0; t <= model.horizon; ++t) {
        const auto& p = profiles[static_cast<std::size_t>(t)];
        if (p.size() != model.n) throw DomainError("profile size does not match the model");
        const auto graph = influence_graph(p);
        const auto it = std::find(model.graphs.begin(), model.graphs.end(), graph);
        if (it == model.graphs.end()) {
            throw DomainError("influence graph at t = " + std::to_string(t) + " is not connected");
        }
        const int g_sel = static_cast<int>(it - model.graphs.begin());
        for (int i = 1; i <= model.n; ++i) values[static_cast<std::size_t>(model.index({VarKind::X, t, i, -1}))] = p.at(i);
        values[static_cast<std::size_t>(model.index({VarKind::U, t, 0, g_sel}))] = 1;
        if (t < model.horizon) {
            for (int i = 1; i <= model.n; ++i) {
                values[static_cast<std::size_t>(model.index({VarKind::Z, t, i, g_sel}))] = p.at(i);
            }
        }
    }
    return values;
}

}  // namespace hk
