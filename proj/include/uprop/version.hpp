#pragma once

namespace uprop {

inline constexpr const char* kVersion = "0.1.0";

} // namespace uprop
