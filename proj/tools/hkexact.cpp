// hkexact: command-line front end for the exact HK toolkit.
//
// Exit codes: 0 success, 1 domain error (bad value, unreadable file, cap hit),
// 2 usage error.

#include "hk/certify.hpp"
#include "hk/configs.hpp"
#include "hk/dynamics.hpp"
#include "hk/graphs.hpp"
#include "hk/milp.hpp"
#include "hk/solver.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

using hk::DomainError;
using hk::Rational;

/// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw DomainError("cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

struct ProfileSource {
    std::string file;
    int equidistant = 0;
    int lower_bound = 0;

    void attach(CLI::App* cmd) {
        auto* f = cmd->add_option("--profile", file, "JSON array of exact opinions, e.g. [\"0\",\"3/2\"]");
        auto* e = cmd->add_option("--equidistant", equidistant, "Opinions 1..N");
        auto* l = cmd->add_option("--lower-bound", lower_bound, "Two-cluster construction with parameter K >= 4");
        f->excludes(e)->excludes(l);
        e->excludes(l);
    }

    hk::OpinionProfile load() const {
        if (!file.empty()) {
            bool sorted = true;
            auto p = hk::load_profile(file, &sorted);
            if (!sorted) std::cerr << "warning: profile was not sorted; agents relabeled in opinion order\n";
            return p;
        }
        if (equidistant > 0) return hk::equidistant(equidistant);
        if (lower_bound > 0) return hk::lower_bound_config({lower_bound});
        throw CLI::RequiredError("--profile, --equidistant or --lower-bound");
    }
};

Rational rational_flag(const std::string& text) { return hk::parse_rational(text); }

std::uint64_t default_budget() {
    if (const char* env = std::getenv("HK_EXACT_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw DomainError(std::string("HK_EXACT_BUDGET is not a count: ") + env);
        }
    }
    return hk::SearchOptions{}.budget;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Hegselmann-Krause toolkit: simulation, lower-bound checks, graph-sequence programs"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::string out_path;
    bool approx = false;
    std::string format = "csv";
    std::size_t cap = 0;

    // simulate
    ProfileSource sim_src;
    auto* sim = app.add_subcommand("simulate", "Simulate exactly and write the trajectory");
    sim_src.attach(sim);
    sim->add_option("--cap", cap, "Step cap (default n^3 + 100)");
    sim->add_option("--out", out_path, "Output file (default stdout)");
    sim->add_option("--format", format, "csv, json or human")->check(CLI::IsMember({"csv", "json", "human"}));
    sim->add_flag("--approx", approx, "Add a decimal approximation column");

    // f-of
    ProfileSource fof_src;
    auto* fof = app.add_subcommand("f-of", "Earliest time of consensus or split");
    fof_src.attach(fof);
    fof->add_option("--cap", cap, "Step cap (default n^3 + 100)");

    // enumerate-graphs
    int enum_n = 0;
    int enum_limit = hk::kDefaultEnumerationLimit;
    bool count_only = false;
    auto* enu = app.add_subcommand("enumerate-graphs", "List connected ordered unit interval graphs");
    enu->add_option("--n", enum_n, "Number of vertices")->required();
    enu->add_option("--limit", enum_limit, "Refuse n above this");
    enu->add_flag("--count-only", count_only, "Print only the number of graphs");
    enu->add_option("--out", out_path, "Output file (default stdout)");

    // verify-lemma
    int lemma_k = 0;
    std::string variant = "both";
    auto* lem = app.add_subcommand("verify-lemma", "Check the lower-bound inequalities by exact simulation");
    lem->add_option("--k", lemma_k, "Cluster weight k >= 4")->required();
    lem->add_option("--variant", variant, "as-printed, shifted or both")
        ->check(CLI::IsMember({"as-printed", "shifted", "both"}));
    lem->add_option("--out", out_path, "CSV report file (default: summary only)");

    // equidistant-report
    long from = 2;
    long to = 2;
    int jobs = 1;
    auto* rep = app.add_subcommand("equidistant-report", "Simulated vs closed-form convergence times");
    rep->add_option("--from", from, "Smallest n (>= 2)")->required();
    rep->add_option("--to", to, "Largest n")->required();
    rep->add_option("--jobs", jobs, "Worker threads");
    rep->add_option("--out", out_path, "Output file (default stdout)");
    rep->add_flag("--approx", approx, "Add a decimal ratio column");

    // build-milp
    int milp_n = 0;
    int milp_T = 0;
    std::string milp_eps = "0";
    std::string ordering = "on";
    bool printed = false;
    bool fix_origin = false;
    std::string sidecar;
    bool show_stats = false;
    auto* blp = app.add_subcommand("build-milp", "Emit the binary program as a CPLEX LP file");
    blp->add_option("--n", milp_n, "Number of agents")->required();
    blp->add_option("--T", milp_T, "Horizon T >= 1")->required();
    blp->add_option("--eps", milp_eps, "Margin as p/q");
    blp->add_option("--ordering", ordering, "Ordering rows x_i <= x_{i+1}: on|off")
        ->check(CLI::IsMember({"on", "off"}));
    blp->add_flag("--printed-dynamics", printed, "Sum x_i^{t-1} once per graph instead of z_{i,I}^{t-1}");
    blp->add_flag("--fix-origin", fix_origin, "Add x_1^0 = 0");
    blp->add_option("--out", out_path, "LP file path")->required();
    blp->add_option("--sidecar", sidecar, "Variable map JSON (default <out>.vars.json)");
    blp->add_flag("--stats", show_stats, "Print variable and constraint counts");

    // search
    int search_n = 0;
    int search_T = 0;
    std::string search_eps = "-1/1000";
    std::uint64_t budget = 0;
    std::string cert_path;
    auto* sea = app.add_subcommand("search", "Decide one (n, T, eps) instance");
    sea->add_option("--n", search_n, "Number of agents")->required();
    sea->add_option("--T", search_T, "Horizon T >= 1")->required();
    sea->add_option("--eps", search_eps, "Margin as p/q");
    sea->add_option("--budget", budget, "LP call cap (default 10^7 or HK_EXACT_BUDGET)");
    sea->add_option("--jobs", jobs, "Worker threads");
    sea->add_option("--cert", cert_path, "Write the certificate here when feasible");
    bool strict_nonedges = false;
    sea->add_flag("--strict-nonedges", strict_nonedges, "Require non-edge gaps > 1 - eps (exact semantics at eps 0)");

    // solve-f
    int f_n = 0;
    int t_max = 0;
    std::string f_eps = "-1/1000";
    auto* sol = app.add_subcommand("solve-f", "Bracket or determine f(n)");
    sol->add_option("--n", f_n, "Number of agents")->required();
    sol->add_option("--tmax", t_max, "Largest horizon tried (default n^2)");
    sol->add_option("--eps", f_eps, "Negative margin for lower-bound runs, p/q");
    sol->add_option("--budget", budget, "LP call cap per search (default 10^7 or HK_EXACT_BUDGET)");
    sol->add_option("--jobs", jobs, "Worker threads");
    sol->add_option("--cert", cert_path, "Certificate path (default f<n>_certificate.json)");

    // replay
    std::string replay_path;
    auto* rpl = app.add_subcommand("replay", "Replay a certificate through the exact dynamics");
    rpl->add_option("--cert", replay_path, "Certificate JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) {
            const auto p = sim_src.load();
            const auto traj = hk::simulate(p, cap ? cap : hk::default_step_cap(p.size()));
            Output out(out_path);
            if (format == "csv") {
                hk::write_trajectory_csv(out.stream(), traj, approx);
            } else if (format == "json") {
                nlohmann::json doc;
                doc["profiles"] = nlohmann::json::array();
                for (const auto& q : traj.profiles) doc["profiles"].push_back(nlohmann::json::parse(hk::profile_to_json(q)));
                doc["termination"] = hk::to_string(traj.termination);
                out.stream() << doc.dump(1) << '\n';
            } else {
                out.stream() << "agents: " << p.size() << "\nsteps recorded: " << traj.profiles.size() - 1
                             << "\ntermination: " << hk::to_string(traj.termination)
                             << "\nfinal clusters: " << hk::cluster_count(traj.profiles.back())
                             << "\nfinal profile: " << hk::to_string(traj.profiles.back()) << '\n';
            }
        } else if (*fof) {
            const auto p = fof_src.load();
            std::cout << hk::f_of(p, cap ? cap : hk::default_step_cap(p.size())) << '\n';
        } else if (*enu) {
            if (count_only) {
                std::cout << hk::enumerate_connected(enum_n, enum_limit).size() << '\n';
            } else {
                nlohmann::json doc = nlohmann::json::array();
                for (const auto& g : hk::enumerate_connected(enum_n, enum_limit)) doc.push_back(hk::to_json(g));
                Output out(out_path);
                out.stream() << doc.dump() << '\n';
            }
        } else if (*lem) {
            std::vector<hk::LemmaVariant> variants;
            if (variant != "shifted") variants.push_back(hk::LemmaVariant::AsPrinted);
            if (variant != "as-printed") variants.push_back(hk::LemmaVariant::Shifted);
            std::unique_ptr<Output> csv;
            if (!out_path.empty()) csv = std::make_unique<Output>(out_path);
            for (auto v : variants) {
                const auto report = hk::verify_lemma(lemma_k, v);
                if (csv) hk::write_lemma_csv(csv->stream(), report);
                std::cout << "k=" << lemma_k << " variant=" << hk::to_string(v) << " steps=0.." << report.t_max
                          << " checks=" << report.checks.size() << " failures=" << report.failures()
                          << " verdict=" << (report.verdict() ? "PASS" : "FAIL") << '\n';
                if (const auto bc = report.base_case_failure()) {
                    std::cout << "  base case fails: " << bc->name << " actual " << bc->actual << " expected "
                              << bc->expected << '\n';
                }
                const auto info = report.failures(true) - report.failures();
                if (info > 0) {
                    std::cout << "  literal chain4 form (informational) fails " << info << " checks\n";
                }
            }
        } else if (*rep) {
            const auto rows = hk::equidistant_report(from, to, jobs);
            Output out(out_path);
            hk::write_equidistant_csv(out.stream(), rows, approx);
        } else if (*blp) {
            hk::BlpOptions opts;
            opts.ordering = ordering == "on";
            opts.printed_dynamics = printed;
            opts.fix_origin = fix_origin;
            const auto model = hk::build_blp(milp_n, milp_T, rational_flag(milp_eps), opts);
            hk::emit_lp(model, out_path, sidecar);
            if (show_stats) {
                const auto s = hk::model_stats(model);
                std::cout << "variables x=" << s.x << " u=" << s.u << " z=" << s.z << " binaries=" << s.binaries
                          << "\nconstraints total=" << s.constraint_total << '\n';
                for (const auto& [family, count] : s.constraints) std::cout << "  " << family << '=' << count << '\n';
            }
        } else if (*sea) {
            hk::SearchOptions opts;
            opts.budget = budget ? budget : default_budget();
            opts.jobs = jobs;
            opts.strict_nonedges = strict_nonedges;
            const auto eps = rational_flag(search_eps);
            const auto res = hk::search_sequence(search_n, search_T, eps, opts);
            std::cout << "n=" << search_n << " T=" << search_T << " eps=" << hk::to_string(eps) << " verdict="
                      << hk::to_string(res.verdict) << " lp_calls=" << res.stats.lp_calls << '\n';
            if (res.certificate) {
                std::cout << "witness " << hk::to_string(res.certificate->witness) << '\n';
                if (!cert_path.empty()) {
                    Output out(cert_path);
                    out.stream() << hk::to_json(*res.certificate).dump(1) << '\n';
                }
            }
        } else if (*sol) {
            hk::FBoundsOptions opts;
            opts.strict_eps = rational_flag(f_eps);
            opts.search.budget = budget ? budget : default_budget();
            opts.search.jobs = jobs;
            const auto res = hk::f_bounds(f_n, t_max > 0 ? t_max : f_n * f_n, opts);
            for (const auto& s : res.steps) {
                std::cerr << "T=" << s.horizon;
                if (s.margin) std::cerr << " margin=" << hk::to_string(*s.margin);
                if (s.exact) std::cerr << " exact=" << hk::to_string(*s.exact);
                std::cerr << " lp_calls=" << s.stats.lp_calls << '\n';
            }
            if (res.exact()) {
                std::cout << "f(" << f_n << ") = " << res.lower << '\n';
            } else if (res.upper) {
                std::cout << "f(" << f_n << ") in [" << res.lower << ", " << *res.upper << "]\n";
            } else {
                std::cout << "f(" << f_n << ") >= " << res.lower << '\n';
            }
            if (res.certificate) {
                const std::string path = cert_path.empty() ? "f" + std::to_string(f_n) + "_certificate.json" : cert_path;
                Output out(path);
                out.stream() << hk::to_json(*res.certificate).dump(1) << '\n';
                std::cout << "certificate: " << path << '\n';
            }
        } else if (*rpl) {
            std::ifstream in(replay_path);
            if (!in) throw DomainError("cannot open " + replay_path);
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw DomainError(std::string("certificate JSON: ") + e.what());
            }
            const auto res = hk::replay_certificate(hk::certificate_from_json(doc));
            std::cout << (res.ok ? "certificate OK" : "certificate REJECTED: " + res.diagnostic) << '\n';
            return res.ok ? 0 : 1;
        }
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
