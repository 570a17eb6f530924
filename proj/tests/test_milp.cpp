#include "hk/configs.hpp"
#include "hk/milp.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using hk::Rational;

namespace {

std::vector<hk::OpinionProfile> trajectory(const hk::OpinionProfile& p0, int T) {
    std::vector<hk::OpinionProfile> out{p0};
    for (int t = 0; t < T; ++t) out.push_back(hk::step(out.back()));
    return out;
}

bool has_prefix(const std::vector<std::string>& names, const std::string& prefix) {
    return std::any_of(names.begin(), names.end(), [&](const std::string& s) { return s.rfind(prefix, 0) == 0; });
}

}  // namespace

TEST_CASE("variable and constraint counts, n = 3, T = 1") {
    const auto model = hk::build_blp(3, 1, Rational(-1, 100));
    const auto st = hk::model_stats(model);
    CHECK(st.x == 6);
    CHECK(st.u == 4);
    CHECK(st.z == 6);
    CHECK(st.binaries == 4);
    CHECK(st.constraints.at("selection") == 2);
    CHECK(st.constraints.at("exclusion") == 1);
    CHECK(st.constraints.at("dynamics") == 3);
    CHECK(st.constraints.at("mccormick_u") + st.constraints.at("mccormick_lx") + st.constraints.at("mccormick_ux") ==
          18);
    CHECK(st.constraints.at("ordering") == 4);
    CHECK(st.constraints.count("fix_origin") == 0);
}

TEST_CASE("variable counts, n = 5, T = 2") {
    const auto st = hk::model_stats(hk::build_blp(5, 2, 0));
    CHECK(st.x == 15);
    CHECK(st.u == 42);
    CHECK(st.z == 140);
}

TEST_CASE("options change the model") {
    hk::BlpOptions opt;
    opt.ordering = false;
    opt.fix_origin = true;
    const auto st = hk::model_stats(hk::build_blp(3, 1, 0, opt));
    CHECK(st.constraints.count("ordering") == 0);
    CHECK(st.constraints.at("fix_origin") == 1);
    CHECK_THROWS_AS(hk::build_blp(1, 1, 0), hk::DomainError);
    CHECK_THROWS_AS(hk::build_blp(3, 0, 0), hk::DomainError);
}

TEST_CASE("variable names") {
    CHECK(hk::variable_name({hk::VarKind::X, 2, 3, -1}) == "x_2_3");
    CHECK(hk::variable_name({hk::VarKind::U, 0, 0, 4}) == "u_0_4");
    CHECK(hk::variable_name({hk::VarKind::Z, 1, 2, 0}) == "z_1_2_0");
}

TEST_CASE("actual trajectories satisfy the program at eps = 0") {
    // Equidistant n = 4 shifted to start at 0; neither consensus nor split for t < 5.
    const hk::OpinionProfile p0({0, 1, 2, 3});
    for (int T = 1; T <= 3; ++T) {
        CAPTURE(T);
        const auto model = hk::build_blp(4, T, 0);
        const auto values = hk::assignment_from_profiles(model, trajectory(p0, T));
        CHECK(hk::violations(model, values).empty());
        // Gaps of exactly 1 violate the margin version.
        const auto strict = hk::build_blp(4, T, Rational(-1, 100));
        CHECK_FALSE(hk::violations(strict, hk::assignment_from_profiles(strict, trajectory(p0, T))).empty());
    }
    // Random profile trajectories that stay non-complete.
    const hk::OpinionProfile q({0, Rational(4, 5), Rational(17, 10), Rational(5, 2), Rational(33, 10)});
    const auto model = hk::build_blp(5, 2, Rational(-1, 100));
    CHECK(hk::violations(model, hk::assignment_from_profiles(model, trajectory(q, 2))).empty());
}

TEST_CASE("printed dynamics form differs from the linearization") {
    hk::BlpOptions opt;
    opt.printed_dynamics = true;
    const hk::OpinionProfile p0({0, 1, 2, 3});
    const auto model = hk::build_blp(4, 2, 0, opt);
    const auto bad = hk::violations(model, hk::assignment_from_profiles(model, trajectory(p0, 2)));
    CHECK(has_prefix(bad, "dyn_"));
}

TEST_CASE("McCormick rows pin z to u x") {
    const hk::OpinionProfile p0({0, 1, 2});
    const auto model = hk::build_blp(3, 1, 0);
    auto base = hk::assignment_from_profiles(model, trajectory(p0, 1));
    REQUIRE(hk::violations(model, base).empty());
    // For every binary u and every x on a grid, only z = u x survives the envelope.
    const int z_var = model.index({hk::VarKind::Z, 0, 2, 0});
    const int x_var = model.index({hk::VarKind::X, 0, 2, -1});
    const int u_var = model.index({hk::VarKind::U, 0, 0, 0});
    for (int u = 0; u <= 1; ++u) {
        for (int xn = 0; xn <= 12; ++xn) {
            for (int zn = 0; zn <= 12; ++zn) {
                auto v = base;
                v[static_cast<std::size_t>(u_var)] = u;
                v[static_cast<std::size_t>(x_var)] = hk::make_rational(xn, 4);
                v[static_cast<std::size_t>(z_var)] = hk::make_rational(zn, 4);
                const auto bad = hk::violations(model, v);
                const bool mc_ok = !has_prefix(bad, "mcu_0_2_0") && !has_prefix(bad, "mcl_0_2_0") &&
                                   !has_prefix(bad, "mcx_0_2_0");
                CHECK(mc_ok == (hk::make_rational(zn, 4) == u * hk::make_rational(xn, 4)));
            }
        }
    }
}

TEST_CASE("LP file is integer-only and complete") {
    const auto model = hk::build_blp(3, 1, Rational(-1, 100));
    std::ostringstream os;
    hk::write_lp(os, model);
    const std::string lp = os.str();
    // Only the leading comment line may carry the exact eps.
    const std::string body = lp.substr(lp.find('\n') + 1);
    CHECK(lp.rfind("\\ ", 0) == 0);
    CHECK(body.find('/') == std::string::npos);
    CHECK(body.find('.') == std::string::npos);
    CHECK(lp.find("e_0_0_1_2: 100 x_0_2 - 100 x_0_1 + 300 u_0_0 <= 399") != std::string::npos);
    CHECK(lp.find("ne_0_0_1_3: 100 x_0_3 - 100 x_0_1 - 101 u_0_0 >= 0") != std::string::npos);
    CHECK(lp.find("excl_0: u_0_1 = 0") != std::string::npos);
    for (const char* section : {"Minimize", "Subject To", "Bounds", "Binaries", "End"}) {
        CHECK(lp.find(section) != std::string::npos);
    }
    // Deterministic output.
    std::ostringstream again;
    hk::write_lp(again, hk::build_blp(3, 1, Rational(-1, 100)));
    CHECK(again.str() == lp);
}

TEST_CASE("emit writes the sidecar next to the LP file") {
    const auto dir = std::filesystem::temp_directory_path() / "hk_milp_emit";
    std::filesystem::create_directories(dir);
    const auto lp = dir / "m.lp";
    hk::emit_lp(hk::build_blp(3, 2, 0), lp);
    REQUIRE(std::filesystem::exists(lp));
    std::ifstream in(dir / "m.lp.vars.json");
    const auto side = nlohmann::json::parse(in);
    CHECK(side.at("n") == 3);
    CHECK(side.at("T") == 2);
    CHECK(side.at("variables").at("z_1_3_1").at("kind") == "Z");
    CHECK(side.at("variables").size() == 9 + 6 + 12);
    std::filesystem::remove_all(dir);
}
