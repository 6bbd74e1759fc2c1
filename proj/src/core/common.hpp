#pragma once

#include <stdexcept>
#include <string>

namespace breathsim {

inline constexpr int kClassCount = 8;

enum class Err {
  invalid_argument,
  invalid_spec,
  synthesis_failure,
  length_mismatch,
  too_short,
  invalid_cutoff,
  invalid_taps,
  bad_pad_length,
  empty_band,
  empty_node,
  empty_dataset,
  dimension_mismatch,
  schema_violation,
  unknown_version,
  class_too_small,
  invalid_k,
  io_failure,
  data_format,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::invalid_argument: return "InvalidArgument";
    case Err::invalid_spec: return "InvalidSpec";
    case Err::synthesis_failure: return "SynthesisFailure";
    case Err::length_mismatch: return "LengthMismatch";
    case Err::too_short: return "TooShort";
    case Err::invalid_cutoff: return "InvalidCutoff";
    case Err::invalid_taps: return "InvalidTaps";
    case Err::bad_pad_length: return "BadPadLength";
    case Err::empty_band: return "EmptyBand";
    case Err::empty_node: return "EmptyNode";
    case Err::empty_dataset: return "EmptyDataset";
    case Err::dimension_mismatch: return "DimensionMismatch";
    case Err::schema_violation: return "SchemaViolation";
    case Err::unknown_version: return "UnknownVersion";
    case Err::class_too_small: return "ClassTooSmall";
    case Err::invalid_k: return "InvalidK";
    case Err::io_failure: return "IoFailure";
    case Err::data_format: return "DataFormat";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Err code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace breathsim
