#include "flowcap/capture_file.hpp"

#include <fstream>
#include <iterator>

#include "flowcap/errors.hpp"

namespace flowcap::netflow {

void append_frame(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> payload) {
    if (payload.size() > 0xFFFF)
        throw InvalidParameters("datagram larger than 65535 bytes cannot be framed");
    out.push_back(static_cast<std::uint8_t>(payload.size() >> 8));
    out.push_back(static_cast<std::uint8_t>(payload.size()));
    out.insert(out.end(), payload.begin(), payload.end());
}

void write_capture(const std::filesystem::path& path, std::span<const std::vector<std::uint8_t>> datagrams) {
    std::vector<std::uint8_t> bytes;
    for (const auto& d : datagrams)
        append_frame(bytes, d);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write capture file '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

CaptureContents split_capture(std::span<const std::uint8_t> bytes) {
    CaptureContents contents;
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        if (bytes.size() - pos < 2) {
            contents.truncated_tail = true;
            break;
        }
        const std::size_t length = (std::size_t{bytes[pos]} << 8) | bytes[pos + 1];
        pos += 2;
        if (bytes.size() - pos < length) {
            contents.truncated_tail = true;
            break;
        }
        contents.datagrams.emplace_back(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                        bytes.begin() + static_cast<std::ptrdiff_t>(pos + length));
        pos += length;
    }
    return contents;
}

CaptureContents read_capture(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open capture file '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return split_capture(bytes);
}

} // namespace flowcap::netflow
