#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clipcard/card.hpp"
#include "clipcard/channel.hpp"

namespace clipcard {

enum class Permission { Granted, Denied };

/// Door-controller side: UID (uppercase hex) -> permission. Unknown or absent
/// UIDs are denied.
struct AccessControlList {
    std::map<std::string, Permission> entries;
};

using Uid = std::vector<std::uint8_t>;

/// Anything on the card side of the air gap that can answer a frame.
using Responder = std::function<std::optional<Frame>(const Frame&)>;

/// Runs REQA -> ATQA -> SELECT -> UID_RESPONSE, each leg through the channel
/// under the given link and gate. Absent unless every leg is delivered.
[[nodiscard]] std::optional<Uid> interrogate(const Responder& respond, const LinkConditions& link,
                                             long long gate_value, const ChannelConfig& cfg = {});

[[nodiscard]] std::optional<Uid> interrogate(const Card& card, const LinkConditions& link,
                                             const ChannelConfig& cfg = {});

[[nodiscard]] Permission access_decision(const std::optional<Uid>& uid,
                                         const AccessControlList& acl);

const char* to_string(Permission p);

} // namespace clipcard
