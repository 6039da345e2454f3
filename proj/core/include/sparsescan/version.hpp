#pragma once

namespace sparsescan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sparsescan
