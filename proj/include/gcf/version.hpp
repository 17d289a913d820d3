#pragma once

namespace gcf {

inline constexpr const char* kVersion = "gcf-lab 0.1.0";

}  // namespace gcf
