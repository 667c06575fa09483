#pragma once

namespace anchorstream {

inline constexpr const char* kVersion = "0.1.0";

} // namespace anchorstream
