#pragma once

namespace trollgraph {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace trollgraph
