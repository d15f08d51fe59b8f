#pragma once

namespace ffcorr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ffcorr
