#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace flowcap::netflow {

// Datagram capture files: a sequence of frames, each a big-endian u16 payload
// length followed by that many bytes of one UDP payload. Framing keeps a
// malformed datagram from desynchronising the ones after it.

void append_frame(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> payload);

void write_capture(const std::filesystem::path& path, std::span<const std::vector<std::uint8_t>> datagrams);

struct CaptureContents {
    std::vector<std::vector<std::uint8_t>> datagrams;
    /// The file ended inside a frame; the partial frame is dropped.
    bool truncated_tail = false;
};

/// Throws Error if the file cannot be opened.
CaptureContents read_capture(const std::filesystem::path& path);
CaptureContents split_capture(std::span<const std::uint8_t> bytes);

} // namespace flowcap::netflow
