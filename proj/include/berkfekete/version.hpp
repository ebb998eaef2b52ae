#pragma once

namespace berkfekete {
inline constexpr const char* kVersion = "0.1.0";
}
