#include "cli/udp_listener.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>

#include "flowcap/errors.hpp"

namespace flowcap::cli {

UdpListener::UdpListener(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos)
        throw ConfigError("listen", "expected ADDR:PORT, got '" + endpoint + "'");
    const std::string host = endpoint.substr(0, colon);
    const std::string port_text = endpoint.substr(colon + 1);
    unsigned port = 0;
    const auto res = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (res.ec != std::errc{} || res.ptr != port_text.data() + port_text.size() || port > 65535)
        throw ConfigError("listen", "invalid port '" + port_text + "'");

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    if (inet_pton(AF_INET, host.empty() ? "0.0.0.0" : host.c_str(), &addr.sin_addr) != 1)
        throw ConfigError("listen", "invalid IPv4 address '" + host + "'");

    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0)
        throw ConfigError("listen", std::string("socket: ") + std::strerror(errno));
    if (::bind(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) != 0) {
        const std::string reason = std::strerror(errno);
        ::close(fd_);
        throw ConfigError("listen", "bind " + endpoint + ": " + reason);
    }
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

UdpListener::~UdpListener() {
    if (fd_ >= 0)
        ::close(fd_);
}

std::optional<std::vector<std::uint8_t>> UdpListener::receive(std::chrono::milliseconds timeout) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (ready <= 0)
        return std::nullopt;
    std::vector<std::uint8_t> buffer(65535);
    const auto n = ::recv(fd_, buffer.data(), buffer.size(), 0);
    if (n < 0)
        return std::nullopt;
    buffer.resize(static_cast<std::size_t>(n));
    return buffer;
}

} // namespace flowcap::cli
