#pragma once

#include <string_view>

#include "core/common.hpp"

namespace breathsim {

// The eight supported breathing patterns, id order is part of the file formats.
enum class BreathingClass : int {
  Eupnea = 0,
  Apnea = 1,
  Tachypnea = 2,
  Bradypnea = 3,
  Hyperpnea = 4,
  Hypopnea = 5,
  Kussmaul = 6,
  Faulty = 7,
};

struct ClassRanges {
  double rate_min = 0.0;   // breaths per minute
  double rate_max = 0.0;
  double depth_min = 0.0;  // fraction of maximum rib-cage travel
  double depth_max = 0.0;
};

int class_id(BreathingClass c);
BreathingClass class_from_id(int id);  // Err::invalid_argument on bad id
std::string_view class_name(BreathingClass c);
int class_id_from_name(std::string_view name);  // -1 when unknown (case-insensitive)

// Rate/depth envelope for a class. Faulty has no characteristic rates or
// depths; its row is the overall envelope [0,50] BPM x [0,1].
ClassRanges class_ranges(BreathingClass c);

}  // namespace breathsim
