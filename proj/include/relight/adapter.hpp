#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "relight/enhancer.hpp"
#include "relight/image.hpp"

namespace relight {

// A child process speaking a framed request/response protocol over its
// standard input/output. One request is in flight at a time; errors are
// fatal to the run (AdapterError / ShapeMismatch), never silently
// recovered.
class Subprocess {
public:
    // The command is run through `sh -c`.
    explicit Subprocess(const std::string& command, int timeout_ms = 60000);
    ~Subprocess();
    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    void send(const std::vector<std::uint8_t>& frame);
    // Reads exactly n bytes, or throws: Timeout when the deadline passes,
    // ProcessExit when the server closes its end.
    void recv_exact(std::uint8_t* dst, std::size_t n);

    const std::string& command() const { return command_; }

private:
    std::string command_;
    int timeout_ms_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
};

// Enhancer forwarding tiles over the enhancement wire protocol.
std::unique_ptr<Enhancer> make_external_enhancer(const std::string& command, int timeout_ms = 60000);

// Full-image scale-probability request over the scale wire protocol.
// Returns the per-pixel long-scale probability plane, clamped to [0,1].
std::vector<float> external_scale_probabilities(Subprocess& server, const Image& dark);

}  // namespace relight
