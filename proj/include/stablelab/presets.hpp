#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stablelab/problem.hpp"

namespace stablelab {

/// Named coefficient families, parameterised by the bounds (mu, nu, K):
///
///   const           b = (mu + nu)/2,                          a = K
///   smooth_sine     b = (mu + nu)/2 + (nu - mu)/2 sin x,      a = K cos x
///   step_b          b = mu for x < 0, nu for x >= 0,          a = K cos x
///   checkerboard_b  b = mu if floor(t) + floor(x) even else nu, a = K cos x
///
/// Every preset carries the exact mollified forms of a and b.
enum class Preset { constant, smooth_sine, step_b, checkerboard_b };

std::string preset_name(Preset p);
std::optional<Preset> parse_preset(const std::string& name);
std::vector<Preset> all_presets();

ProblemSpec make_preset(Preset p, double mu, double nu, double K, double alpha, double lam);

}  // namespace stablelab
