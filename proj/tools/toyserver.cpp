// Framed stdin/stdout server speaking the external-operator wire
// protocol. The role argument picks the behavior; the faulty roles
// exercise every adapter failure path from the outside.
//
//   enh-echo          tile in, same tile out
//   enh-lgain         scales the L plane by the request gain, clamped to 100
//   enh-badshape      answers with side d+1
//   enh-badmagic      answers with a corrupt magic
//   enh-truncate      answers the header plus half the payload, then exits
//   enh-die           reads one request and exits 3 without answering
//   hang              reads one request and sleeps forever
//   scl-const:<p>     constant scale probability
//   scl-luma          p=1 where the pixel's CIELAB L/100 < 0.35
//   scl-badshape      answers with width w+1

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "relight/detail/pixel_math.hpp"
#include "relight/wire.hpp"

using namespace relight;

namespace {

bool read_exact(void* dst, std::size_t n) {
    std::size_t got = 0;
    auto* p = static_cast<unsigned char*>(dst);
    while (got < n) {
        const std::size_t r = std::fread(p + got, 1, n - got, stdin);
        if (r == 0) return false;
        got += r;
    }
    return true;
}

void write_all(const void* src, std::size_t n) {
    if (std::fwrite(src, 1, n, stdout) != n) std::exit(1);
    std::fflush(stdout);
}

[[noreturn]] void die(const char* msg) {
    std::fprintf(stderr, "toyserver: %s\n", msg);
    std::exit(1);
}

int serve_enh(const std::string& role) {
    for (;;) {
        std::uint8_t header[wire::kEnhRequestHeader];
        if (!std::fread(header, 1, 1, stdin)) return 0;  // clean EOF between frames
        if (!read_exact(header + 1, sizeof(header) - 1)) die("truncated request header");
        if (std::memcmp(header, wire::kEnhMagic, 4) != 0) die("expected an enhance request");
        const std::uint32_t d = wire::get_u32(header + 4);
        const std::uint32_t ch = wire::get_u32(header + 8);
        const float gain = wire::get_f32(header + 12);
        std::vector<float> samples(static_cast<std::size_t>(d) * d * ch);
        if (!read_exact(samples.data(), samples.size() * sizeof(float)))
            die("truncated request payload");

        if (role == "enh-die") return 3;
        if (role == "hang") {
            for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
        }
        if (role == "enh-lgain") {
            for (std::size_t i = 0; i < static_cast<std::size_t>(d) * d; ++i)
                samples[i] = std::min(100.0f, samples[i] * gain);
        }
        if (role == "enh-badshape") {
            const std::vector<float> bigger(static_cast<std::size_t>(d + 1) * (d + 1) * ch, 0.0f);
            write_all(wire::enh_response(d + 1, ch, bigger.data()).data(),
                      wire::kEnhResponseHeader + bigger.size() * sizeof(float));
            continue;
        }
        std::vector<std::uint8_t> response = wire::enh_response(d, ch, samples.data());
        if (role == "enh-badmagic") {
            std::memcpy(response.data(), "XXXX", 4);
            write_all(response.data(), response.size());
            continue;
        }
        if (role == "enh-truncate") {
            write_all(response.data(), wire::kEnhResponseHeader +
                                           samples.size() * sizeof(float) / 2);
            return 0;
        }
        write_all(response.data(), response.size());
    }
}

int serve_scl(const std::string& role) {
    for (;;) {
        std::uint8_t header[wire::kSclHeader];
        if (!std::fread(header, 1, 1, stdin)) return 0;
        if (!read_exact(header + 1, sizeof(header) - 1)) die("truncated request header");
        if (std::memcmp(header, wire::kSclMagic, 4) != 0) die("expected a scale request");
        const std::uint32_t h = wire::get_u32(header + 4);
        const std::uint32_t w = wire::get_u32(header + 8);
        const std::uint32_t ch = wire::get_u32(header + 12);
        const std::size_t npix = static_cast<std::size_t>(h) * w;
        std::vector<float> samples(npix * ch);
        if (!read_exact(samples.data(), samples.size() * sizeof(float)))
            die("truncated request payload");

        std::vector<float> p(npix, 0.0f);
        if (role.rfind("scl-const:", 0) == 0) {
            const float value = std::strtof(role.c_str() + 10, nullptr);
            std::fill(p.begin(), p.end(), value);
        } else if (role == "scl-luma") {
            for (std::size_t i = 0; i < npix; ++i) {
                const double r = samples[i];
                const double g = ch >= 3 ? samples[npix + i] : r;
                const double b = ch >= 3 ? samples[2 * npix + i] : r;
                double L, a, bb;
                detail::srgb_to_lab(r, g, b, &L, &a, &bb);
                p[i] = L / 100.0 < 0.35 ? 1.0f : 0.0f;
            }
        } else if (role == "scl-badshape") {
            const std::vector<float> bigger(static_cast<std::size_t>(h) * (w + 1), 0.0f);
            write_all(wire::scl_response(h, w + 1, bigger.data()).data(),
                      wire::kSclHeader + bigger.size() * sizeof(float));
            continue;
        } else {
            die("unknown scale role");
        }
        const std::vector<std::uint8_t> response = wire::scl_response(h, w, p.data());
        write_all(response.data(), response.size());
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) die("usage: toyserver <role>");
    const std::string role = argv[1];
    if (role.rfind("enh-", 0) == 0 || role == "hang") return serve_enh(role);
    if (role.rfind("scl-", 0) == 0) return serve_scl(role);
    die("unknown role");
}
