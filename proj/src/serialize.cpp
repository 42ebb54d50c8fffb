#include "hk/serialize.hpp"

#include <algorithm>
#include <utility>

namespace hk {

using nlohmann::json;

namespace {

template <class Parse>
auto read_configuration(const json& j, Parse parse)
{
    if (!j.is_object()) throw ArgumentError("configuration must be a JSON object");
    for (const char* key : {"epsilon", "opinions"})
        if (!j.contains(key)) throw ArgumentError(std::string("configuration is missing '") + key + "'");
    const auto& ops = j.at("opinions");
    if (!ops.is_array() || ops.empty()) throw ArgumentError("'opinions' must be a nonempty array");

    using S = decltype(parse(j.at("epsilon")));
    std::vector<std::vector<S>> opinions;
    for (const auto& row : ops) {
        if (!row.is_array()) throw ArgumentError("each opinion must be an array of coordinates");
        std::vector<S> x;
        for (const auto& v : row) x.push_back(parse(v));
        opinions.push_back(std::move(x));
    }
    if (j.contains("dim")) {
        if (!j.at("dim").is_number_integer() || j.at("dim").get<long long>() != static_cast<long long>(opinions.front().size()))
            throw ArgumentError("'dim' does not match the opinion vectors");
    }
    return BasicConfiguration<S>(opinions, parse(j.at("epsilon")));
}

Rational rational_value(const json& v)
{
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return Rational(v.get<double>());
    throw ArgumentError("coordinate must be a number or a \"p/q\" string");
}

double double_value(const json& v)
{
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_rational(v.get<std::string>()).get_d();
    throw ArgumentError("coordinate must be a number or a \"p/q\" string");
}

}  // namespace

std::string rational_to_string(const Rational& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(const std::string& s)
{
    if (s.empty()) throw ArgumentError("empty rational literal");
    if (s.find_first_of(".eE") != std::string::npos) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw ArgumentError("malformed number '" + s + "'");
        }
        if (used != s.size()) throw ArgumentError("malformed number '" + s + "'");
        return Rational(v);
    }
    Rational q;
    if (q.set_str(s, 10) != 0) throw ArgumentError("malformed rational '" + s + "'");
    if (q.get_den() == 0) throw ArgumentError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

json to_json(const Configuration& c)
{
    json ops = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto row = c.row(i);
        ops.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"epsilon", c.epsilon()}, {"dim", c.dim()}, {"opinions", std::move(ops)}};
}

json to_json(const RationalConfiguration& c)
{
    json ops = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        json row = json::array();
        for (const auto& v : c.row(i)) row.push_back(rational_to_string(v));
        ops.push_back(std::move(row));
    }
    return {{"epsilon", rational_to_string(c.epsilon())}, {"dim", c.dim()}, {"opinions", std::move(ops)}};
}

Configuration configuration_from_json(const json& j) { return read_configuration(j, double_value); }

RationalConfiguration rational_configuration_from_json(const json& j)
{
    return read_configuration(j, rational_value);
}

json to_json(const Profile& p)
{
    json edges = json::array();
    for (const auto& [a, b] : p.edges) edges.push_back({a, b});
    return {{"n", p.n}, {"edges", std::move(edges)}};
}

Profile profile_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw ArgumentError("profile needs 'n' and 'edges'");
    Profile p;
    p.n = j.at("n").get<std::size_t>();
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) throw ArgumentError("each edge must be a pair");
        auto a = e[0].get<std::size_t>(), b = e[1].get<std::size_t>();
        if (a == b || a < 1 || b < 1 || a > p.n || b > p.n) throw ArgumentError("edge endpoint out of range");
        p.edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(p.edges.begin(), p.edges.end());
    p.edges.erase(std::unique(p.edges.begin(), p.edges.end()), p.edges.end());
    return p;
}

json to_json(const McEstimate& est, Event event, int n, int d, double eps)
{
    return {{"event", std::string(to_string(event))},
            {"n", n},
            {"d", d},
            {"eps", eps},
            {"trials", est.trials},
            {"successes", est.successes},
            {"p_hat", est.p_hat},
            {"stderr", est.stderr_},
            {"ci95", {est.ci_lo, est.ci_hi}},
            {"cap_reached", est.cap_reached}};
}

}  // namespace hk
