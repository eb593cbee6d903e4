#pragma once

#include <optional>
#include <string>

#include "adjbraid/calculus.hpp"

namespace adjbraid {

/// SVG picture of the one-block arrangement. n = 3: the three lines in the plane
/// with six labeled chambers. n = 4: stereographic projection of the unit-sphere
/// trace of the seven hyperplanes, one region per chamber (the chamber around the
/// projection pole is the background). Chambers with positive highlight coefficient
/// are red, negative blue.
std::string render_svg(int n, const std::optional<ShardVector>& highlight);

}  // namespace adjbraid
