#pragma once

#include <string_view>

namespace pdg::log {

// Warnings go to std::clog unless silenced (tests silence them).
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

} // namespace pdg::log
