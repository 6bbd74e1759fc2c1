#pragma once

namespace breathsim {

inline constexpr const char* kVersion = "1.0.0";

// Format tags embedded in every persisted artifact.
inline constexpr const char* kTraceFormat = "breathsim-trace-v1";
inline constexpr const char* kModelFormat = "breathsim-model-v1";
inline constexpr const char* kReportFormat = "breathsim-report-v1";

}  // namespace breathsim
