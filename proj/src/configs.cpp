#include "hk/configs.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hk {

OpinionProfile equidistant(int n) {
    if (n < 1) throw DomainError("equidistant configuration needs n >= 1");
    std::vector<Rational> x;
    x.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) x.emplace_back(i);
    return OpinionProfile(std::move(x));
}

OpinionProfile lower_bound_config(LowerBoundParams params) {
    const int k = params.k;
    if (k < 4) throw DomainError("lower-bound configuration needs k >= 4, got " + std::to_string(k));
    const Rational inv_k(1, k);
    std::vector<Rational> x;
    x.reserve(static_cast<std::size_t>(params.agents()));
    x.insert(x.end(), static_cast<std::size_t>(k), Rational(-inv_k));
    x.emplace_back(0);
    x.emplace_back(1);
    x.insert(x.end(), static_cast<std::size_t>(k), Rational(1 + inv_k));
    return OpinionProfile(std::move(x));
}

OpinionProfile shift_to_window(const OpinionProfile& p, const Rational& width) {
    const Rational lo = p.at(1);
    if (p.at(p.size()) - lo > width) {
        throw DomainError("profile spread exceeds window width " + to_string(width));
    }
    std::vector<Rational> x(p.values().begin(), p.values().end());
    for (auto& v : x) v -= lo;
    return OpinionProfile(std::move(x));
}

OpinionProfile parse_profile_json(std::string_view text, bool* was_sorted) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("profile JSON: ") + e.what());
    }
    if (!doc.is_array()) throw DomainError("profile JSON must be an array");
    std::vector<Rational> x;
    for (const auto& item : doc) {
        if (item.is_string()) {
            x.push_back(parse_rational(item.get<std::string>()));
        } else if (item.is_number_integer()) {
            x.push_back(parse_rational(item.dump()));
        } else if (item.is_number_float()) {
            throw DomainError("profile JSON: floating-point value " + item.dump() + " is not exact; write it as \"p/q\"");
        } else {
            throw DomainError("profile JSON: unexpected element " + item.dump());
        }
    }
    return OpinionProfile::from_unsorted(std::move(x), was_sorted);
}

std::string profile_to_json(const OpinionProfile& p) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& v : p.values()) doc.push_back(to_string(v));
    return doc.dump();
}

OpinionProfile load_profile(const std::filesystem::path& path, bool* was_sorted) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open profile file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_profile_json(buf.str(), was_sorted);
}

void save_profile(const OpinionProfile& p, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write profile file " + path.string());
    out << profile_to_json(p) << '\n';
}

}  // namespace hk
