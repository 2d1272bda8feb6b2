#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pfs {

// Payload representation of an embedded entity.
enum class Encoding { raw, uuencode };

class CodecError : public std::runtime_error {
public:
    enum class Kind { decode_error, length_mismatch };

    CodecError(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

namespace uu {

// Classic uuencode: 45 input bytes per line, a length character in
// front, 6-bit groups offset by 0x20 with 0 written as '`'. The stream
// ends with a lone '`' line. No begin/end framing lines are used; the
// surrounding entity tags carry name and mode.
inline constexpr std::size_t kBytesPerLine = 45;

inline char encode_char(unsigned v) {
    v &= 0x3F;
    return v == 0 ? '`' : static_cast<char>(0x20 + v);
}

inline int decode_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x20 || u > 0x60) return -1;
    return static_cast<int>((u - 0x20) & 0x3F);
}

inline std::string encode(std::string_view data) {
    std::string out;
    out.reserve((data.size() / 3 + 2) * 4 + data.size() / kBytesPerLine * 2 + 4);
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t n = std::min(kBytesPerLine, data.size() - pos);
        out.push_back(encode_char(static_cast<unsigned>(n)));
        for (std::size_t i = 0; i < n; i += 3) {
            unsigned b0 = static_cast<unsigned char>(data[pos + i]);
            unsigned b1 = i + 1 < n ? static_cast<unsigned char>(data[pos + i + 1]) : 0;
            unsigned b2 = i + 2 < n ? static_cast<unsigned char>(data[pos + i + 2]) : 0;
            out.push_back(encode_char(b0 >> 2));
            out.push_back(encode_char((b0 << 4) | (b1 >> 4)));
            out.push_back(encode_char((b1 << 2) | (b2 >> 6)));
            out.push_back(encode_char(b2));
        }
        out.push_back('\n');
        pos += n;
    }
    out.push_back('`');
    out.push_back('\n');
    return out;
}

inline std::string decode(std::string_view region) {
    std::string out;
    std::size_t pos = 0;
    while (true) {
        if (pos >= region.size())
            throw CodecError(CodecError::Kind::decode_error, "uuencode region missing terminator");
        std::size_t eol = region.find('\n', pos);
        if (eol == std::string_view::npos)
            throw CodecError(CodecError::Kind::decode_error, "unterminated uuencode line");
        std::string_view line = region.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos = eol + 1;
        if (line.empty())
            throw CodecError(CodecError::Kind::decode_error, "empty uuencode line");
        int n = decode_char(line[0]);
        if (n < 0)
            throw CodecError(CodecError::Kind::decode_error, "bad uuencode length character");
        if (n == 0) {
            if (line.size() != 1)
                throw CodecError(CodecError::Kind::decode_error, "malformed uuencode terminator line");
            break;
        }
        if (static_cast<std::size_t>(n) > kBytesPerLine)
            throw CodecError(CodecError::Kind::decode_error, "uuencode line claims more than 45 bytes");
        std::size_t groups = (static_cast<std::size_t>(n) + 2) / 3;
        if (line.size() != 1 + groups * 4)
            throw CodecError(CodecError::Kind::decode_error, "uuencode line length mismatch");
        std::size_t produced = 0;
        for (std::size_t g = 0; g < groups; ++g) {
            int v[4];
            for (int k = 0; k < 4; ++k) {
                v[k] = decode_char(line[1 + g * 4 + k]);
                if (v[k] < 0)
                    throw CodecError(CodecError::Kind::decode_error, "bad uuencode data character");
            }
            unsigned b0 = static_cast<unsigned>((v[0] << 2) | (v[1] >> 4)) & 0xFF;
            unsigned b1 = static_cast<unsigned>((v[1] << 4) | (v[2] >> 2)) & 0xFF;
            unsigned b2 = static_cast<unsigned>((v[2] << 6) | v[3]) & 0xFF;
            if (produced < static_cast<std::size_t>(n)) { out.push_back(static_cast<char>(b0)); ++produced; }
            if (produced < static_cast<std::size_t>(n)) { out.push_back(static_cast<char>(b1)); ++produced; }
            if (produced < static_cast<std::size_t>(n)) { out.push_back(static_cast<char>(b2)); ++produced; }
        }
    }
    if (pos != region.size())
        throw CodecError(CodecError::Kind::decode_error, "trailing bytes after uuencode terminator");
    return out;
}

}  // namespace uu

inline std::string encode_content(std::string_view data, Encoding encoding) {
    if (encoding == Encoding::raw) return std::string(data);
    return uu::encode(data);
}

inline std::string decode_content(std::string_view data, Encoding encoding,
                                  std::uint64_t expected_length) {
    std::string out = encoding == Encoding::raw ? std::string(data) : uu::decode(data);
    if (out.size() != expected_length)
        throw CodecError(CodecError::Kind::length_mismatch,
                         "decoded " + std::to_string(out.size()) + " bytes, expected " +
                             std::to_string(expected_length));
    return out;
}

}  // namespace pfs
