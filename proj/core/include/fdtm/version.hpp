#pragma once

#include <string_view>

namespace fdtm {

/// Library version with the abbreviated commit hash, e.g. "0.1.0-g1a2b3c4".
std::string_view version_string() noexcept;

}  // namespace fdtm
