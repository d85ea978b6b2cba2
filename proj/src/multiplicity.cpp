#include "tgm/multiplicity.hpp"

#include <algorithm>

#include "tgm/error.hpp"

namespace tgm {

std::string Multiplicity::to_string() const {
  return std::to_string(min) + ".." + (max ? std::to_string(*max) : std::string("*"));
}

Multiplicity most_general_multiplicity(std::span<const Multiplicity> ms) {
  if (ms.empty()) throw Error(ErrorCode::EmptyList, "most general multiplicity of an empty list");
  Multiplicity out = ms.front();
  for (const auto& m : ms.subspan(1)) {
    out.min = std::min(out.min, m.min);
    if (!out.max || !m.max) {
      out.max.reset();
    } else {
      out.max = std::max(*out.max, *m.max);
    }
  }
  return out;
}

}  // namespace tgm
