#pragma once

#include <string>

#include "entgauss/distribution.hpp"

namespace entgauss {

// Resolves a constellation argument: either a path to a JSON document
// {"atoms":[...],"probs":[...]} or the shorthand "dgauss:h=<value><bits|nats>"
// for the capacity-achieving discrete Gaussian at entropy h.
DiscreteDistribution load_constellation(const std::string& spec_or_path);

// JSON document {"atoms":[...],"probs":[...]} for a distribution.
std::string constellation_json(const DiscreteDistribution& dist);

}  // namespace entgauss
