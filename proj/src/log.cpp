#include "pdg/log.hpp"

#include <atomic>
#include <iostream>

namespace pdg::log {

namespace {
std::atomic<bool> g_enabled{true};
}

void warn(std::string_view message)
{
    if (g_enabled.load())
        std::clog << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_enabled.store(enabled); }

bool warnings_enabled() { return g_enabled.load(); }

} // namespace pdg::log
