#pragma once

namespace tracemult {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace tracemult
