#pragma once

#include <cstdint>

namespace flowcap {

/// One observation of a link: when, how loaded (percent of capacity) and how
/// many flows were active.
struct LinkSample {
    double timestamp = 0.0;      ///< seconds
    double utilization = 0.0;    ///< percent
    std::uint64_t active_flows = 0;

    friend bool operator==(const LinkSample&, const LinkSample&) = default;
};

} // namespace flowcap
