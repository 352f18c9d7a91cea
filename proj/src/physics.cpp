// Copyright 2026 The rydhm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rydhm/physics.hpp"

#include <cmath>
#include <limits>

#include "rydhm/error.hpp"

namespace rydhm {

std::string_view to_string(LevelScheme scheme) {
  return scheme == LevelScheme::three_level ? "three_level" : "two_level";
}

LevelScheme level_scheme_from_string(std::string_view name) {
  if (name == "three_level" || name == "3") return LevelScheme::three_level;
  if (name == "two_level" || name == "2") return LevelScheme::two_level;
  throw ValidationError("unknown level scheme '" + std::string(name) + "'");
}

void DriveParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"omega12", omega12},         {"omega23", omega23},
      {"delta", delta},             {"gamma21", gamma21},
      {"gamma32", gamma32},         {"dephasing21", dephasing21},
      {"dephasing32", dephasing32},
  };
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      throw ValidationError(std::string("drive parameter ") + name + " is not finite");
    }
  }
  const std::pair<const char*, double> rates[] = {
      {"gamma21", gamma21},
      {"gamma32", gamma32},
      {"dephasing21", dephasing21},
      {"dephasing32", dephasing32},
  };
  for (const auto& [name, value] : rates) {
    if (value < 0.0) {
      throw ValidationError(std::string("rate ") + name + " must be >= 0");
    }
  }
}

int level_index(LevelScheme scheme, Label label) {
  if (scheme == LevelScheme::three_level) {
    if (label >= 1 && label <= 3) return label - 1;
  } else {
    if (label == kGround) return 0;
    if (label == kRydberg) return 1;
  }
  throw ValidationError("invalid level label " + std::to_string(int(label)) +
                        " for scheme " + std::string(to_string(scheme)));
}

Label label_of_level(LevelScheme scheme, int level) {
  if (scheme == LevelScheme::three_level) {
    if (level >= 0 && level < 3) return static_cast<Label>(level + 1);
  } else {
    if (level == 0) return kGround;
    if (level == 1) return kRydberg;
  }
  throw ValidationError("invalid level index " + std::to_string(level));
}

InteractionSpec::InteractionSpec(double c6) : c6_(c6) {
  if (!std::isfinite(c6)) throw ValidationError("c6 must be finite");
}

void InteractionSpec::set_override(std::size_t i, std::size_t j, double value_mhz) {
  if (i == j) throw ValidationError("coupling override needs two distinct atoms");
  if (!std::isfinite(value_mhz)) throw ValidationError("coupling override must be finite");
  overrides_[std::minmax(i, j)] = value_mhz;
}

double InteractionSpec::coupling(std::size_t i, std::size_t j, double r) const {
  if (!overrides_.empty()) {
    if (auto it = overrides_.find(std::minmax(i, j)); it != overrides_.end()) {
      return it->second;
    }
  }
  return pair_coupling(*this, r);
}

double InteractionSpec::coupling_from_squared(std::size_t i, std::size_t j,
                                              double r2) const {
  if (!overrides_.empty()) {
    if (auto it = overrides_.find(std::minmax(i, j)); it != overrides_.end()) {
      return it->second;
    }
  }
  if (!(r2 > 0.0)) {
    throw DegenerateGeometryError("two atoms at identical positions");
  }
  return c6_ / (r2 * r2 * r2);
}

double pair_coupling(const InteractionSpec& spec, double r) {
  if (!(r > 0.0)) {
    throw DegenerateGeometryError("two atoms at identical positions");
  }
  if (std::isinf(r)) return 0.0;
  const double r2 = r * r;
  return spec.c6() / (r2 * r2 * r2);
}

double pair_coupling(const InteractionSpec& spec, std::size_t i, std::size_t j,
                     double r) {
  return spec.coupling(i, j, r);
}

double resonance_distance(double c6, double energy_mhz) {
  if (!(energy_mhz > 0.0) || !(c6 > 0.0)) {
    throw ValidationError("resonance distance needs c6 > 0 and energy > 0");
  }
  return std::pow(c6 / energy_mhz, 1.0 / 6.0);
}

}  // namespace rydhm
