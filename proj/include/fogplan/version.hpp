#pragma once

namespace fogplan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fogplan
