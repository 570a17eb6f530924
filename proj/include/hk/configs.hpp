#pragma once

#include "hk/dynamics.hpp"

#include <filesystem>
#include <iosfwd>
#include <string_view>

namespace hk {

/// Two weight-k clusters flanking a central pair; n = 2k + 2.
struct LowerBoundParams {
    int k = 4;

    int agents() const { return 2 * k + 2; }
    int j1() const { return 1; }
    int j2() const { return k + 1; }
    int j3() const { return k + 2; }
    int j4() const { return k + 3; }
};

/// Opinions 1, 2, ..., n.
OpinionProfile equidistant(int n);

/// Agents 1..k at -1/k, agent k+1 at 0, agent k+2 at 1, agents k+3..2k+2 at 1 + 1/k.
/// Requires k >= 4.
OpinionProfile lower_bound_config(LowerBoundParams params);

/// Translates the profile so its minimum is 0. Throws if the spread exceeds `width`.
OpinionProfile shift_to_window(const OpinionProfile& p, const Rational& width);

/// JSON array of exact literals, e.g. ["1", "3/2", "-1/4"]. JSON integers are
/// accepted; floats and decimal strings are rejected. Unsorted input is sorted
/// and reported through `was_sorted`.
OpinionProfile parse_profile_json(std::string_view text, bool* was_sorted = nullptr);
std::string profile_to_json(const OpinionProfile& p);

OpinionProfile load_profile(const std::filesystem::path& path, bool* was_sorted = nullptr);
void save_profile(const OpinionProfile& p, const std::filesystem::path& path);

}  // namespace hk
