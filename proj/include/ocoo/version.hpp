#pragma once

namespace ocoo {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace ocoo
