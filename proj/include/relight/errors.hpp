#pragma once

#include <stdexcept>
#include <string>

namespace relight {

// Exit codes used by the CLI and documented in the README. Library code
// throws the exception types below; tools map them to these codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitBadConfig = 2,
    kExitIo = 3,
    kExitAdapter = 4,
    kExitShapeMismatch = 5,
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument, option, or precondition violation.
struct InvalidInput : Error {
    using Error::Error;
};

// File system and codec failures.
struct IoError : Error {
    using Error::Error;
};

// Two buffers that must agree in shape do not.
struct ShapeMismatch : Error {
    using Error::Error;
};

// External-process adapter failures. The pipeline aborts on any of these;
// there is no silent fallback.
struct AdapterError : Error {
    enum class Kind { Spawn, ProcessExit, MalformedFrame, Timeout };
    Kind kind;
    AdapterError(Kind k, const std::string& msg) : Error(msg), kind(k) {}
};

}  // namespace relight
