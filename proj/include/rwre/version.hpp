#pragma once

namespace rwre {
inline constexpr const char* VERSION = "rwre 1.0.0";
}
