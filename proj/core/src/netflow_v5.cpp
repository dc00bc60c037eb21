#include "flowcap/netflow_v5.hpp"

#include "flowcap/errors.hpp"

namespace flowcap::netflow {

namespace {

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return bytes_[pos_++]; }
    std::uint16_t u16() {
        const auto v = static_cast<std::uint16_t>((bytes_[pos_] << 8) | bytes_[pos_ + 1]);
        pos_ += 2;
        return v;
    }
    std::uint32_t u32() {
        const std::uint32_t v = (std::uint32_t{bytes_[pos_]} << 24) | (std::uint32_t{bytes_[pos_ + 1]} << 16) |
                                (std::uint32_t{bytes_[pos_ + 2]} << 8) | std::uint32_t{bytes_[pos_ + 3]};
        pos_ += 4;
        return v;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

class Writer {
public:
    explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) {
        out_.push_back(static_cast<std::uint8_t>(v >> 8));
        out_.push_back(static_cast<std::uint8_t>(v));
    }
    void u32(std::uint32_t v) {
        for (int shift = 24; shift >= 0; shift -= 8)
            out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }

private:
    std::vector<std::uint8_t>& out_;
};

} // namespace

V5Datagram parse_v5_datagram(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2)
        throw ParseError(ParseErrorKind::TruncatedDatagram, bytes.size(), "datagram ends inside the version field");
    const auto version = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
    if (version != kVersion)
        throw ParseError(ParseErrorKind::BadVersion, 0, "version " + std::to_string(version) + ", expected 5");
    if (bytes.size() < kHeaderSize) {
        throw ParseError(ParseErrorKind::TruncatedDatagram, bytes.size(),
                         "header needs 24 bytes, got " + std::to_string(bytes.size()));
    }

    Reader in(bytes);
    V5Datagram dg;
    auto& h = dg.header;
    h.version = in.u16();
    h.count = in.u16();
    if (h.count < 1 || h.count > kMaxRecords)
        throw ParseError(ParseErrorKind::BadCount, 2, "record count " + std::to_string(h.count) + " outside 1..30");
    const std::size_t expected = kHeaderSize + kRecordSize * h.count;
    if (bytes.size() != expected) {
        throw ParseError(ParseErrorKind::TruncatedDatagram, std::min(bytes.size(), expected),
                         "length " + std::to_string(bytes.size()) + " bytes, header promises " +
                             std::to_string(expected));
    }
    h.sys_uptime = in.u32();
    h.unix_secs = in.u32();
    h.unix_nsecs = in.u32();
    h.flow_sequence = in.u32();
    h.engine_type = in.u8();
    h.engine_id = in.u8();
    h.sampling_interval = in.u16();

    dg.records.resize(h.count);
    for (auto& r : dg.records) {
        r.src_addr = in.u32();
        r.dst_addr = in.u32();
        r.next_hop = in.u32();
        r.input_if = in.u16();
        r.output_if = in.u16();
        r.packets = in.u32();
        r.octets = in.u32();
        r.first = in.u32();
        r.last = in.u32();
        r.src_port = in.u16();
        r.dst_port = in.u16();
        r.pad1 = in.u8();
        r.tcp_flags = in.u8();
        r.protocol = in.u8();
        r.tos = in.u8();
        r.src_as = in.u16();
        r.dst_as = in.u16();
        r.src_mask = in.u8();
        r.dst_mask = in.u8();
        r.pad2 = in.u16();
    }
    return dg;
}

std::vector<std::uint8_t> encode_v5_datagram(const V5Datagram& dg) {
    const auto& h = dg.header;
    if (h.count != dg.records.size())
        throw InvalidParameters("header count " + std::to_string(h.count) + " does not match " +
                                std::to_string(dg.records.size()) + " records");
    if (h.count < 1 || h.count > kMaxRecords)
        throw InvalidParameters("record count must be in 1..30");

    std::vector<std::uint8_t> bytes;
    bytes.reserve(kHeaderSize + kRecordSize * h.count);
    Writer out(bytes);
    out.u16(h.version);
    out.u16(h.count);
    out.u32(h.sys_uptime);
    out.u32(h.unix_secs);
    out.u32(h.unix_nsecs);
    out.u32(h.flow_sequence);
    out.u8(h.engine_type);
    out.u8(h.engine_id);
    out.u16(h.sampling_interval);
    for (const auto& r : dg.records) {
        out.u32(r.src_addr);
        out.u32(r.dst_addr);
        out.u32(r.next_hop);
        out.u16(r.input_if);
        out.u16(r.output_if);
        out.u32(r.packets);
        out.u32(r.octets);
        out.u32(r.first);
        out.u32(r.last);
        out.u16(r.src_port);
        out.u16(r.dst_port);
        out.u8(r.pad1);
        out.u8(r.tcp_flags);
        out.u8(r.protocol);
        out.u8(r.tos);
        out.u16(r.src_as);
        out.u16(r.dst_as);
        out.u8(r.src_mask);
        out.u8(r.dst_mask);
        out.u16(r.pad2);
    }
    return bytes;
}

AbsoluteSpan to_absolute_time(const V5Header& header, const V5Record& record) {
    // Millisecond quantities are combined in integers first so that the
    // common case (whole-second export time) is exact.
    const auto export_ms = static_cast<std::int64_t>(header.unix_secs) * 1000;
    const std::int64_t boot_ms = export_ms - static_cast<std::int64_t>(header.sys_uptime);
    const double nsecs = static_cast<double>(header.unix_nsecs) * 1e-9;
    const double boot = static_cast<double>(boot_ms) / 1000.0 + nsecs;
    if (boot < 0.0) {
        throw ParseError(ParseErrorKind::ClockInconsistent, 4,
                         "sys_uptime " + std::to_string(header.sys_uptime) + " ms predates the epoch");
    }
    if (record.first > record.last) {
        throw ParseError(ParseErrorKind::ClockInconsistent, 24,
                         "record first " + std::to_string(record.first) + " ms is after last " +
                             std::to_string(record.last) + " ms");
    }
    AbsoluteSpan span;
    span.first = static_cast<double>(boot_ms + static_cast<std::int64_t>(record.first)) / 1000.0 + nsecs;
    span.last = static_cast<double>(boot_ms + static_cast<std::int64_t>(record.last)) / 1000.0 + nsecs;
    return span;
}

std::string format_ipv4(std::uint32_t address) {
    return std::to_string(address >> 24) + '.' + std::to_string((address >> 16) & 0xFF) + '.' +
           std::to_string((address >> 8) & 0xFF) + '.' + std::to_string(address & 0xFF);
}

} // namespace flowcap::netflow
