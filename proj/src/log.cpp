#include "relight/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace relight::log {

static Level parse_env() {
    const char* v = std::getenv("TILE_ENSEMBLE_LOG");
    if (!v) return Level::Warn;
    if (!std::strcmp(v, "error")) return Level::Error;
    if (!std::strcmp(v, "warn")) return Level::Warn;
    if (!std::strcmp(v, "info")) return Level::Info;
    if (!std::strcmp(v, "debug")) return Level::Debug;
    return Level::Warn;
}

Level level() {
    static const Level lvl = parse_env();
    return lvl;
}

void write(Level lvl, const char* fmt, ...) {
    if (static_cast<int>(lvl) > static_cast<int>(level())) return;
    static const char* names[] = {"error", "warn", "info", "debug"};
    std::fprintf(stderr, "[%s] ", names[static_cast<int>(lvl)]);
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

}  // namespace relight::log
