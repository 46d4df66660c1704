#include "cluttergen/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cluttergen {

namespace {

void requireSize(int width, int height, std::size_t have, std::size_t perPixel,
                 const char* what) {
    if (width <= 0 || height <= 0)
        throw std::invalid_argument(std::string(what) + ": non-positive dimensions");
    if (have != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * perPixel)
        throw std::invalid_argument(std::string(what) + ": pixel buffer size mismatch");
}

// Reads one whitespace-delimited token, skipping '#' comments per Netpbm.
std::string nextToken(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

int parsePositive(const std::string& tok, const char* what) {
    if (tok.empty()) throw std::runtime_error(std::string("truncated header: ") + what);
    int v = std::stoi(tok);
    if (v <= 0) throw std::runtime_error(std::string("non-positive ") + what);
    return v;
}

} // namespace

void writePgm16(const std::string& path, const Image16& image) {
    requireSize(image.width, image.height, image.pixels.size(), 1, "PGM16");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write PGM: " + path);
    out << "P5\n" << image.width << " " << image.height << "\n65535\n";
    std::string body;
    body.reserve(image.pixels.size() * 2);
    for (std::uint16_t v : image.pixels) {
        body.push_back(static_cast<char>(v >> 8));  // most significant byte first
        body.push_back(static_cast<char>(v & 0xff));
    }
    out << body;
    if (!out) throw std::runtime_error("short write on PGM: " + path);
}

Image16 readPgm16(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open PGM: " + path);
    if (nextToken(in) != "P5") throw std::runtime_error("not a binary PGM: " + path);
    Image16 img;
    img.width = parsePositive(nextToken(in), "width");
    img.height = parsePositive(nextToken(in), "height");
    if (parsePositive(nextToken(in), "maxval") != 65535)
        throw std::runtime_error("PGM maxval is not 65535: " + path);
    // the single whitespace byte after maxval was consumed by nextToken

    std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
    std::string body(n * 2, '\0');
    in.read(body.data(), static_cast<std::streamsize>(body.size()));
    if (static_cast<std::size_t>(in.gcount()) != body.size())
        throw std::runtime_error("truncated PGM body: " + path);
    img.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        img.pixels[i] = static_cast<std::uint16_t>(
            (static_cast<unsigned char>(body[2 * i]) << 8) |
            static_cast<unsigned char>(body[2 * i + 1]));
    }
    return img;
}

void writePpm8(const std::string& path, const Image8& image) {
    requireSize(image.width, image.height, image.pixels.size(), 3, "PPM8");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write PPM: " + path);
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
    if (!out) throw std::runtime_error("short write on PPM: " + path);
}

Image8 readPpm8(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open PPM: " + path);
    if (nextToken(in) != "P6") throw std::runtime_error("not a binary PPM: " + path);
    Image8 img;
    img.width = parsePositive(nextToken(in), "width");
    img.height = parsePositive(nextToken(in), "height");
    if (parsePositive(nextToken(in), "maxval") != 255)
        throw std::runtime_error("PPM maxval is not 255: " + path);

    std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3;
    img.pixels.resize(n);
    in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw std::runtime_error("truncated PPM body: " + path);
    return img;
}

Image16 depthToImage(const ViewCapture& capture) {
    Image16 img{capture.width, capture.height, {}};
    img.pixels.reserve(capture.depth.size());
    for (double d : capture.depth) {
        double mm = std::clamp(std::round(d * 1000.0), 0.0, 65535.0);
        img.pixels.push_back(static_cast<std::uint16_t>(mm));
    }
    return img;
}

Image16 segToImage(const ViewCapture& capture) {
    Image16 img{capture.width, capture.height, {}};
    img.pixels.reserve(capture.segmentation.size());
    for (int id : capture.segmentation) {
        int v = id == kBackgroundId ? 0 : id + 1;
        if (v < 0 || v > 65535) throw std::invalid_argument("object id outside PGM16 range");
        img.pixels.push_back(static_cast<std::uint16_t>(v));
    }
    return img;
}

Image8 colorToImage(const ViewCapture& capture) {
    Image8 img{capture.width, capture.height, {}};
    img.pixels.reserve(capture.color.size() * 3);
    for (const Vec3& c : capture.color) {
        for (int k = 0; k < 3; ++k) {
            double v = std::clamp(c[k], 0.0, 1.0);
            img.pixels.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
        }
    }
    return img;
}

} // namespace cluttergen
