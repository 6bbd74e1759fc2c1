#include "core/classes.hpp"

#include <array>
#include <cctype>
#include <string>

namespace breathsim {

namespace {

struct ClassRow {
  std::string_view name;
  ClassRanges ranges;
};

constexpr std::array<ClassRow, kClassCount> kClassTable = {{
    {"Eupnea", {12.0, 20.0, 0.30, 0.58}},
    {"Apnea", {0.0, 0.0, 0.00, 0.00}},
    {"Tachypnea", {21.0, 50.0, 0.30, 0.58}},
    {"Bradypnea", {1.0, 11.0, 0.30, 0.58}},
    {"Hyperpnea", {12.0, 20.0, 0.59, 1.00}},
    {"Hypopnea", {12.0, 20.0, 0.01, 0.29}},
    {"Kussmaul", {21.0, 50.0, 0.59, 1.00}},
    {"Faulty", {0.0, 50.0, 0.00, 1.00}},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

int class_id(BreathingClass c) { return static_cast<int>(c); }

BreathingClass class_from_id(int id) {
  require(id >= 0 && id < kClassCount, Err::invalid_argument,
          "class id " + std::to_string(id) + " out of range 0.." + std::to_string(kClassCount - 1));
  return static_cast<BreathingClass>(id);
}

std::string_view class_name(BreathingClass c) { return kClassTable[static_cast<std::size_t>(class_id(c))].name; }

int class_id_from_name(std::string_view name) {
  std::string n = lower(name);
  for (int i = 0; i < kClassCount; ++i) {
    if (n == lower(kClassTable[static_cast<std::size_t>(i)].name)) return i;
  }
  return -1;
}

ClassRanges class_ranges(BreathingClass c) {
  return kClassTable[static_cast<std::size_t>(class_id(c))].ranges;
}

}  // namespace breathsim
