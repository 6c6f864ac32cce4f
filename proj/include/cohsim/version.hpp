#pragma once

namespace cohsim {

inline constexpr const char* kToolName = "cohsim";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace cohsim
