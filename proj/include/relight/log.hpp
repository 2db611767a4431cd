#pragma once

#include <cstdarg>

namespace relight::log {

enum class Level : int { Error = 0, Warn = 1, Info = 2, Debug = 3 };

// Current level comes from the TILE_ENSEMBLE_LOG environment variable
// (error|warn|info|debug, default warn), read once.
Level level();

void write(Level lvl, const char* fmt, ...)
#if defined(__GNUC__)
    __attribute__((format(printf, 2, 3)))
#endif
    ;

}  // namespace relight::log

#define RL_ERROR(...) ::relight::log::write(::relight::log::Level::Error, __VA_ARGS__)
#define RL_WARN(...) ::relight::log::write(::relight::log::Level::Warn, __VA_ARGS__)
#define RL_INFO(...) ::relight::log::write(::relight::log::Level::Info, __VA_ARGS__)
#define RL_DEBUG(...) ::relight::log::write(::relight::log::Level::Debug, __VA_ARGS__)
