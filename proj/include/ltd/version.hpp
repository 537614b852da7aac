#pragma once

#define LTD_VERSION_MAJOR 0
#define LTD_VERSION_MINOR 1
#define LTD_VERSION_PATCH 0

namespace ltd {

inline constexpr const char* version = "0.1.0";

}  // namespace ltd
