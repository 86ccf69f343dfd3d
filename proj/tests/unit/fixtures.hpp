#pragma once

#include <string>

#include "toricurves/fan.hpp"

inline toricurves::Fan fixture(const std::string& name) {
  return toricurves::load_fan(std::string(TORICURVES_FAN_DIR) + "/" + name + ".json");
}

inline const char* const kFixtureFans[] = {"p1", "p2", "p3", "p1xp1", "bl1p2", "dp6"};
