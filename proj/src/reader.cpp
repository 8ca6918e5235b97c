#include "clipcard/reader.hpp"

#include "clipcard/hex.hpp"

namespace clipcard {

namespace {

// One request/response exchange; absent if either leg or the card is silent.
std::optional<Frame> exchange(const Responder& respond, Frame request,
                              const LinkConditions& link, long long gate_value,
                              const ChannelConfig& cfg) {
    const auto delivered = transmit(request, link, gate_value, cfg);
    if (!delivered)
        return std::nullopt;
    const auto reply = respond(*delivered);
    if (!reply)
        return std::nullopt;
    return transmit(*reply, link, gate_value, cfg);
}

} // namespace

std::optional<Uid> interrogate(const Responder& respond, const LinkConditions& link,
                               long long gate_value, const ChannelConfig& cfg) {
    link.validate();
    const auto atqa = exchange(
        respond, Frame{FrameDirection::ReaderToCard, FrameKind::Reqa, {0x26}}, link, gate_value,
        cfg);
    if (!atqa || atqa->kind != FrameKind::Atqa)
        return std::nullopt;
    const auto uid_frame = exchange(
        respond, Frame{FrameDirection::ReaderToCard, FrameKind::Select, {0x93, 0x70}}, link,
        gate_value, cfg);
    if (!uid_frame || uid_frame->kind != FrameKind::UidResponse)
        return std::nullopt;
    return uid_frame->payload;
}

std::optional<Uid> interrogate(const Card& card, const LinkConditions& link,
                               const ChannelConfig& cfg) {
    return interrogate([&card](const Frame& f) { return card.respond(f); }, link,
                       card.gate_value(), cfg);
}

Permission access_decision(const std::optional<Uid>& uid, const AccessControlList& acl) {
    if (!uid)
        return Permission::Denied;
    const auto it = acl.entries.find(to_hex(*uid));
    if (it == acl.entries.end())
        return Permission::Denied;
    return it->second;
}

const char* to_string(Permission p) {
    return p == Permission::Granted ? "granted" : "denied";
}

} // namespace clipcard
