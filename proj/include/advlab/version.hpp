#pragma once

namespace advlab {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace advlab
