#pragma once

// Builder for the binary linear program over (x, u, z) whose feasibility at
// margin eps brackets f(n), plus an exact CPLEX-LP writer.

#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/simplex.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hk {

enum class VarKind { X, U, Z };

/// X: opinion of agent i at time t. U: graph g selected at time t.
/// Z: agent i's opinion routed through graph g at time t.
/// Agents are 1-based, graph indices are 0-based positions in the canonical
/// enumeration order.
struct VarKey {
    VarKind kind = VarKind::X;
    int t = 0;
    int i = 0;   // unused (0) for U
    int g = -1;  // unused (-1) for X

    friend bool operator==(const VarKey&, const VarKey&) = default;
};

std::string variable_name(const VarKey& key);

struct Variable {
    VarKey key;
    Rational lower;
    Rational upper;
    bool binary = false;
};

struct Term {
    int var = 0;
    Rational coeff;
};

enum class Family {
    Edge,
    NonEdge,
    Selection,
    Exclusion,
    Dynamics,
    McCormickUpperU,  // z <= n u
    McCormickLowerX,  // z >= x - n (1 - u)
    McCormickUpperX,  // z <= x
    Ordering,
    FixOrigin,
};

std::string to_string(Family f);

struct Constraint {
    Family family = Family::Edge;
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    Rational rhs;
};

struct BlpOptions {
    bool ordering = true;          // x_i^t <= x_{i+1}^t
    bool printed_dynamics = false; // x_i^{t-1} summed once per graph instead of z_{i,I}^{t-1}
    bool fix_origin = false;       // x_1^0 = 0
    int enumeration_limit = kDefaultEnumerationLimit;
};

struct BlpModel {
    int n = 0;
    int horizon = 0;
    Rational eps;
    BlpOptions options;
    std::vector<OrderedUIGraph> graphs;
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<Term> objective;  // minimized

    int index(const VarKey& key) const;
};

BlpModel build_blp(int n, int horizon, const Rational& eps, const BlpOptions& options = {});

struct ModelStats {
    std::size_t x = 0;
    std::size_t u = 0;
    std::size_t z = 0;
    std::size_t binaries = 0;
    std::map<std::string, std::size_t> constraints;  // by family name
    std::size_t constraint_total = 0;
};

ModelStats model_stats(const BlpModel& model);

/// CPLEX LP text. Each constraint is scaled by the lcm of its denominators so
/// every written number is an integer; the objective is integral already.
void write_lp(std::ostream& out, const BlpModel& model);

/// Variable name -> {kind, t, i, g} for decoding solver output.
nlohmann::json sidecar_json(const BlpModel& model);

/// Writes the LP file and its sidecar (`<lp_path>.vars.json` unless given).
void emit_lp(const BlpModel& model, const std::filesystem::path& lp_path,
             std::filesystem::path sidecar_path = {});

/// Names of constraints, bounds and integrality conditions violated by `values`
/// (one value per model variable). Empty means the assignment is feasible.
std::vector<std::string> violations(const BlpModel& model, const std::vector<Rational>& values);

/// Assignment induced by an actual trajectory: x from the profiles (t = 0..T,
/// already inside [0, n]), u from each profile's influence graph, z = u x.
std::vector<Rational> assignment_from_profiles(const BlpModel& model, const std::vector<OpinionProfile>& profiles);

}  // namespace hk
