#pragma once

#include <string>
#include <string_view>

#include "coevo/errors.hpp"

namespace coevo {

enum class Species { predator, prey };

inline Species opponent_of(Species s) {
  return s == Species::predator ? Species::prey : Species::predator;
}

inline std::string_view to_string(Species s) {
  return s == Species::predator ? "predator" : "prey";
}

inline Species species_from_string(std::string_view name) {
  if (name == "predator") return Species::predator;
  if (name == "prey") return Species::prey;
  throw InvalidInput("unknown species '" + std::string(name) + "'");
}

}  // namespace coevo
