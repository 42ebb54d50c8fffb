// JSON encodings for configurations, profiles and estimates.
//
//   configuration: {"epsilon": e, "dim": d, "opinions": [[...], ...]}
//                  exact values are strings "p/q"
//   profile:       {"n": n, "edges": [[i, j], ...]}  with i < j, sorted
#pragma once

#include "hk/configuration.hpp"
#include "hk/estimator.hpp"
#include "hk/profile.hpp"

#include <json.hpp>

#include <string>

namespace hk {

/// "p/q" with q > 0, always written with an explicit denominator.
std::string rational_to_string(const Rational& q);
/// Accepts "p/q", "p" or a decimal such as "0.25". Throws ArgumentError.
Rational parse_rational(const std::string& s);

nlohmann::json to_json(const Configuration& c);
nlohmann::json to_json(const RationalConfiguration& c);

/// Numbers and "p/q" strings are both accepted; throws ArgumentError on
/// malformed input or when "dim" disagrees with the opinion vectors.
Configuration configuration_from_json(const nlohmann::json& j);
RationalConfiguration rational_configuration_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Profile& p);
Profile profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const McEstimate& est, Event event, int n, int d, double eps);

}  // namespace hk
