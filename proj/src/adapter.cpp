#include "relight/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>

#include "relight/log.hpp"
#include "relight/wire.hpp"

namespace relight {
namespace {

using Clock = std::chrono::steady_clock;

void close_quiet(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
}

// A dead server surfaces as EPIPE on write; handle it as a result, not a
// signal.
void ignore_sigpipe_once() {
    static const bool done = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)done;
}

}  // namespace

Subprocess::Subprocess(const std::string& command, int timeout_ms)
    : command_(command), timeout_ms_(timeout_ms) {
    if (command.empty()) throw InvalidInput("adapter command is empty");
    if (timeout_ms_ <= 0) throw InvalidInput("adapter timeout must be positive");
    ignore_sigpipe_once();

    int to_child[2], from_child[2];
    if (::pipe(to_child) != 0) {
        throw AdapterError(AdapterError::Kind::Spawn, "pipe() failed: " + std::string(std::strerror(errno)));
    }
    if (::pipe(from_child) != 0) {
        const int e = errno;
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw AdapterError(AdapterError::Kind::Spawn, "pipe() failed: " + std::string(std::strerror(e)));
    }
    const int pid = ::fork();
    if (pid < 0) {
        const int e = errno;
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        throw AdapterError(AdapterError::Kind::Spawn, "fork() failed: " + std::string(std::strerror(e)));
    }
    if (pid == 0) {
        // Own process group, so teardown can kill the server even when
        // /bin/sh keeps running it as a child instead of exec'ing it.
        ::setpgid(0, 0);
        ::dup2(to_child[0], STDIN_FILENO);
        ::dup2(from_child[1], STDOUT_FILENO);
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        ::signal(SIGPIPE, SIG_DFL);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);  // mirror of the child's call; first one wins
    pid_ = pid;
    to_child_ = to_child[1];
    from_child_ = from_child[0];
    ::close(to_child[0]);
    ::close(from_child[1]);
    RL_DEBUG("spawned adapter pid %d: %s", pid_, command_.c_str());
}

Subprocess::~Subprocess() {
    close_quiet(to_child_);  // EOF: a well-behaved server exits
    close_quiet(from_child_);
    if (pid_ <= 0) return;
    int status = 0;
    for (int i = 0; i < 50; ++i) {  // up to ~500 ms of grace
        if (::waitpid(pid_, &status, WNOHANG) != 0) return;
        ::usleep(10000);
    }
    // Kill the whole group: killing only the spawned pid would orphan the
    // server wherever /bin/sh runs it as a child, and an orphan holding
    // inherited pipe ends stalls everything still reading them.
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
}

void Subprocess::send(const std::vector<std::uint8_t>& frame) {
    std::size_t off = 0;
    while (off < frame.size()) {
        const ssize_t n = ::write(to_child_, frame.data() + off, frame.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            if (errno == EPIPE) {
                throw AdapterError(AdapterError::Kind::ProcessExit,
                                   "server '" + command_ + "' exited mid-request");
            }
            throw AdapterError(AdapterError::Kind::ProcessExit,
                               "write to server '" + command_ + "' failed: " + std::strerror(errno));
        }
        off += static_cast<std::size_t>(n);
    }
}

void Subprocess::recv_exact(std::uint8_t* dst, std::size_t n) {
    const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms_);
    std::size_t off = 0;
    while (off < n) {
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
        if (left.count() <= 0) {
            throw AdapterError(AdapterError::Kind::Timeout,
                               "server '" + command_ + "' sent no response within " +
                                   std::to_string(timeout_ms_) + " ms");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
        if (pr < 0) {
            if (errno == EINTR) continue;
            throw AdapterError(AdapterError::Kind::ProcessExit,
                               "poll on server '" + command_ + "' failed: " + std::strerror(errno));
        }
        if (pr == 0) continue;  // re-check the deadline
        const ssize_t got = ::read(from_child_, dst + off, n - off);
        if (got < 0) {
            if (errno == EINTR) continue;
            throw AdapterError(AdapterError::Kind::ProcessExit,
                               "read from server '" + command_ + "' failed: " + std::strerror(errno));
        }
        if (got == 0) {
            throw AdapterError(AdapterError::Kind::ProcessExit,
                               "server '" + command_ + "' closed its output mid-frame");
        }
        off += static_cast<std::size_t>(got);
    }
}

namespace {

struct ExternalEnhancer final : Enhancer {
    Subprocess server;

    ExternalEnhancer(const std::string& command, int timeout_ms) : server(command, timeout_ms) {}

    Tile enhance(const Tile& tile, float gain, std::uint64_t) override {
        if (tile.color_space != ColorSpace::Lab) throw InvalidInput("enhancers take LAB tiles");
        server.send(wire::enh_request(static_cast<std::uint32_t>(tile.size),
                                      static_cast<std::uint32_t>(tile.channels), gain,
                                      tile.data.data()));
        std::uint8_t header[wire::kEnhResponseHeader];
        server.recv_exact(header, sizeof header);
        if (std::memcmp(header, wire::kEnhMagic, 4) != 0) {
            throw AdapterError(AdapterError::Kind::MalformedFrame,
                               "server '" + server.command() + "' replied with a bad frame magic");
        }
        const std::uint32_t d = wire::get_u32(header + 4);
        const std::uint32_t ch = wire::get_u32(header + 8);
        if (d != static_cast<std::uint32_t>(tile.size) ||
            ch != static_cast<std::uint32_t>(tile.channels)) {
            throw ShapeMismatch("server '" + server.command() + "' returned a " + std::to_string(d) +
                                "x" + std::to_string(d) + "x" + std::to_string(ch) +
                                " tile for a " + std::to_string(tile.size) + "x" +
                                std::to_string(tile.size) + "x" + std::to_string(tile.channels) +
                                " request");
        }
        Tile out = tile;
        server.recv_exact(reinterpret_cast<std::uint8_t*>(out.data.data()),
                          out.data.size() * sizeof(float));
        return out;
    }

    bool concurrent_safe() const override { return false; }
};

}  // namespace

std::unique_ptr<Enhancer> make_external_enhancer(const std::string& command, int timeout_ms) {
    return std::make_unique<ExternalEnhancer>(command, timeout_ms);
}

std::vector<float> external_scale_probabilities(Subprocess& server, const Image& dark) {
    dark.require_color_space(ColorSpace::SRGB);
    server.send(wire::scl_request(static_cast<std::uint32_t>(dark.height),
                                  static_cast<std::uint32_t>(dark.width),
                                  static_cast<std::uint32_t>(dark.channels), dark.data.data()));
    std::uint8_t header[wire::kSclHeader];
    server.recv_exact(header, sizeof header);
    if (std::memcmp(header, wire::kSclMagic, 4) != 0) {
        throw AdapterError(AdapterError::Kind::MalformedFrame,
                           "server '" + server.command() + "' replied with a bad frame magic");
    }
    const std::uint32_t h = wire::get_u32(header + 4);
    const std::uint32_t w = wire::get_u32(header + 8);
    const std::uint32_t c = wire::get_u32(header + 12);
    if (h != static_cast<std::uint32_t>(dark.height) || w != static_cast<std::uint32_t>(dark.width) ||
        c != 1) {
        throw ShapeMismatch("scale server '" + server.command() + "' returned a " +
                            std::to_string(h) + "x" + std::to_string(w) + "x" + std::to_string(c) +
                            " map for a " + std::to_string(dark.height) + "x" +
                            std::to_string(dark.width) + " image");
    }
    std::vector<float> p(static_cast<std::size_t>(dark.height) * dark.width);
    server.recv_exact(reinterpret_cast<std::uint8_t*>(p.data()), p.size() * sizeof(float));
    std::size_t clamped = 0;
    for (float& v : p) {
        if (v < 0.0f || v > 1.0f || !std::isfinite(v)) {
            ++clamped;
            v = v < 0.0f || !std::isfinite(v) ? 0.0f : 1.0f;
        }
    }
    if (clamped) RL_WARN("scale server returned %zu out-of-range probabilities; clamped", clamped);
    return p;
}

}  // namespace relight
