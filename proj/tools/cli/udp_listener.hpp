#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flowcap::cli {

/// Blocking IPv4 UDP receiver for NetFlow exports.
class UdpListener {
public:
    /// `endpoint` is "ADDR:PORT"; port 0 picks an ephemeral port. Throws
    /// ConfigError on a malformed endpoint or a failed bind.
    explicit UdpListener(const std::string& endpoint);
    ~UdpListener();

    UdpListener(const UdpListener&) = delete;
    UdpListener& operator=(const UdpListener&) = delete;

    std::uint16_t port() const noexcept { return port_; }

    /// One datagram, or nullopt if nothing arrived within `timeout`.
    std::optional<std::vector<std::uint8_t>> receive(std::chrono::milliseconds timeout);

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

} // namespace flowcap::cli
