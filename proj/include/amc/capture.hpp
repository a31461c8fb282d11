#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "modulation.hpp"

namespace amc {

// Capture container, format version 1 (see docs/capture_format.md):
// fixed 47-byte little-endian header followed by interleaved I,Q float32.
class CaptureFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class CaptureVersionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class CaptureCorruptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class CaptureDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CaptureHeader {
    std::uint32_t version = 1;
    std::uint64_t sample_count = 0;
    double center_freq_hz = 0.0;
    double sample_rate_hz = 0.0;
    std::optional<double> snr_db;
    std::optional<ModulationScheme> label;
};

namespace detail {

inline constexpr char kCaptureMagic[8] = {'A', 'M', 'C', 'I', 'Q', 'C', 'A', 'P'};
inline constexpr std::uint32_t kCaptureVersion = 1;
inline constexpr std::size_t kCaptureHeaderSize = 47;

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
inline void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

struct ByteReader {
    const unsigned char* p;
    std::size_t size;
    std::size_t pos = 0;

    bool need(std::size_t n) const { return pos + n <= size; }
    std::uint8_t u8() { return p[pos++]; }
    std::uint32_t u32() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    float f32() { return std::bit_cast<float>(u32()); }
};

}  // namespace detail

inline void write_capture(const std::string& path, const IqFrame& frame, double center_freq_hz = 0.0,
                          double sample_rate_hz = 0.0) {
    for (std::size_t i = 0; i < frame.samples.size(); ++i)
        if (!std::isfinite(frame.samples[i].real()) || !std::isfinite(frame.samples[i].imag()))
            throw CaptureDataError("capture write: non-finite sample at index " + std::to_string(i));

    std::string buf;
    buf.reserve(detail::kCaptureHeaderSize + frame.samples.size() * 8);
    buf.append(detail::kCaptureMagic, sizeof(detail::kCaptureMagic));
    detail::put_u32(buf, detail::kCaptureVersion);
    detail::put_u64(buf, frame.samples.size());
    detail::put_f64(buf, center_freq_hz);
    detail::put_f64(buf, sample_rate_hz);
    buf.push_back(frame.snr_db.has_value() ? 1 : 0);
    detail::put_f64(buf, frame.snr_db.value_or(0.0));
    buf.push_back(frame.label.has_value() ? 1 : 0);
    buf.push_back(frame.label ? static_cast<char>(static_cast<int>(*frame.label)) : 0);
    for (const auto& s : frame.samples) {
        detail::put_f32(buf, static_cast<float>(s.real()));
        detail::put_f32(buf, static_cast<float>(s.imag()));
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open capture file for writing: " + path);
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw std::runtime_error("write failure on capture file: " + path);
}

inline IqFrame parse_capture(const std::string& path, CaptureHeader* header_out = nullptr) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open capture file: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                     std::istreambuf_iterator<char>());

    detail::ByteReader r{bytes.data(), bytes.size()};
    if (!r.need(detail::kCaptureHeaderSize))
        throw CaptureCorruptionError("capture corrupt: file ends at byte " +
                                     std::to_string(bytes.size()) + ", header needs " +
                                     std::to_string(detail::kCaptureHeaderSize));
    char magic[8];
    std::memcpy(magic, r.p, 8);
    r.pos = 8;
    if (std::memcmp(magic, detail::kCaptureMagic, 8) != 0)
        throw CaptureFormatError("not a capture file (bad magic): " + path);
    CaptureHeader h;
    h.version = r.u32();
    if (h.version != detail::kCaptureVersion)
        throw CaptureVersionError("unsupported capture version " + std::to_string(h.version));
    h.sample_count = r.u64();
    h.center_freq_hz = r.f64();
    h.sample_rate_hz = r.f64();
    const bool has_snr = r.u8() != 0;
    const double snr = r.f64();
    if (has_snr) h.snr_db = snr;
    const bool has_label = r.u8() != 0;
    const int label = r.u8();
    if (has_label) {
        if (label < 0 || label >= static_cast<int>(kSchemeCount))
            throw CaptureFormatError("capture label out of range: " + std::to_string(label));
        h.label = static_cast<ModulationScheme>(label);
    }

    const std::size_t expected = detail::kCaptureHeaderSize + h.sample_count * 8;
    if (bytes.size() < expected)
        throw CaptureCorruptionError("capture corrupt: truncated payload, file ends at byte " +
                                     std::to_string(bytes.size()) + ", expected " +
                                     std::to_string(expected));

    IqFrame f;
    f.samples.resize(h.sample_count);
    for (std::size_t i = 0; i < h.sample_count; ++i) {
        const float re = r.f32();
        const float im = r.f32();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw CaptureDataError("capture data: non-finite sample at index " + std::to_string(i));
        f.samples[i] = {static_cast<double>(re), static_cast<double>(im)};
    }
    f.snr_db = h.snr_db;
    f.label = h.label;
    if (header_out) *header_out = h;
    return f;
}

}  // namespace amc
