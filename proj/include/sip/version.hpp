#pragma once

namespace sip {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sip
