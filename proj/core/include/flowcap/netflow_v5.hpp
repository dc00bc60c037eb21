#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// NetFlow version 5 export datagrams. All fields are big-endian on the wire.
//
//   header (24 bytes)
//     0  version           u16   always 5
//     2  count             u16   records that follow, 1..30
//     4  sys_uptime        u32   ms since the exporter booted
//     8  unix_secs         u32
//    12  unix_nsecs        u32
//    16  flow_sequence     u32
//    20  engine_type       u8
//    21  engine_id         u8
//    22  sampling_interval u16
//
//   record (48 bytes)
//     0  src_addr u32   4 dst_addr u32   8 next_hop u32
//    12  input_if u16  14 output_if u16
//    16  packets  u32  20 octets u32
//    24  first    u32  28 last u32       (sys_uptime ms at first/last packet)
//    32  src_port u16  34 dst_port u16
//    36  pad1 u8  37 tcp_flags u8  38 protocol u8  39 tos u8
//    40  src_as u16  42 dst_as u16
//    44  src_mask u8  45 dst_mask u8  46 pad2 u16

namespace flowcap::netflow {

inline constexpr std::size_t kHeaderSize = 24;
inline constexpr std::size_t kRecordSize = 48;
inline constexpr std::uint16_t kMaxRecords = 30;
inline constexpr std::uint16_t kVersion = 5;

struct V5Header {
    std::uint16_t version = kVersion;
    std::uint16_t count = 0;
    std::uint32_t sys_uptime = 0;
    std::uint32_t unix_secs = 0;
    std::uint32_t unix_nsecs = 0;
    std::uint32_t flow_sequence = 0;
    std::uint8_t engine_type = 0;
    std::uint8_t engine_id = 0;
    std::uint16_t sampling_interval = 0;

    /// Sampling rate from the low 14 bits; the top two bits carry the mode.
    std::uint16_t sampling_rate() const noexcept { return sampling_interval & 0x3FFF; }

    friend bool operator==(const V5Header&, const V5Header&) = default;
};

struct V5Record {
    std::uint32_t src_addr = 0;
    std::uint32_t dst_addr = 0;
    std::uint32_t next_hop = 0;
    std::uint16_t input_if = 0;
    std::uint16_t output_if = 0;
    std::uint32_t packets = 0;
    std::uint32_t octets = 0;
    std::uint32_t first = 0;
    std::uint32_t last = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t pad1 = 0;
    std::uint8_t tcp_flags = 0;
    std::uint8_t protocol = 0;
    std::uint8_t tos = 0;
    std::uint16_t src_as = 0;
    std::uint16_t dst_as = 0;
    std::uint8_t src_mask = 0;
    std::uint8_t dst_mask = 0;
    std::uint16_t pad2 = 0;

    friend bool operator==(const V5Record&, const V5Record&) = default;
};

struct V5Datagram {
    V5Header header;
    std::vector<V5Record> records;

    friend bool operator==(const V5Datagram&, const V5Datagram&) = default;
};

/// Decodes one datagram. Padding bytes are kept so that encoding the result
/// reproduces the input exactly. Throws ParseError: BadVersion (offset 0),
/// BadCount (offset 2), TruncatedDatagram (offset where the length stops
/// matching 24 + 48 * count).
V5Datagram parse_v5_datagram(std::span<const std::uint8_t> bytes);

/// Inverse of parse_v5_datagram. Throws InvalidParameters if header.count
/// disagrees with the record list or is outside 1..30.
std::vector<std::uint8_t> encode_v5_datagram(const V5Datagram& datagram);

/// Absolute epoch seconds of a record's first and last packet.
struct AbsoluteSpan {
    double first = 0.0;
    double last = 0.0;
};

/// boot = unix_secs + unix_nsecs * 1e-9 - sys_uptime / 1000;
/// first/last = boot + first/1000, boot + last/1000.
/// Throws ParseError(ClockInconsistent) if the boot time or either endpoint is
/// negative, or if first > last.
AbsoluteSpan to_absolute_time(const V5Header& header, const V5Record& record);

std::string format_ipv4(std::uint32_t address);

} // namespace flowcap::netflow
