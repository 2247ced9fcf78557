#pragma once

namespace ciftest {

inline constexpr const char* version = "0.1.0";

}  // namespace ciftest
