#include "clipcard/channel.hpp"

#include <cmath>
#include <numbers>

#include "clipcard/errors.hpp"

namespace clipcard {

void LinkConditions::validate() const {
    if (!std::isfinite(distance_mm) || distance_mm < 0.0)
        throw ValidationError("link: distance must be >= 0");
    if (!std::isfinite(angle_deg) || angle_deg < 0.0 || angle_deg > 90.0)
        throw ValidationError("link: angle must be within [0, 90] degrees");
    if (!std::isfinite(lateral_offset_mm))
        throw ValidationError("link: lateral offset must be finite");
}

void Frame::validate() const {
    if (payload.size() > kMaxFramePayload)
        throw ValidationError("frame: payload exceeds 32 bytes");
}

double coupling_coefficient(const LinkConditions& link, const ChannelConfig& cfg) {
    link.validate();
    const double angle_rad = link.angle_deg * std::numbers::pi / 180.0;
    const double ratio = link.distance_mm / cfg.d0_mm;
    return cfg.k0 * std::cos(angle_rad) / (1.0 + ratio * ratio * ratio);
}

bool tag_powered(double k, long long gate_value, double k_min) {
    return gate_value > 0 && k >= k_min;
}

std::optional<Frame> transmit(const Frame& frame, const LinkConditions& link,
                              long long gate_value, const ChannelConfig& cfg) {
    frame.validate();
    if (!tag_powered(coupling_coefficient(link, cfg), gate_value, cfg.k_min))
        return std::nullopt;
    return frame;
}

const char* to_string(FrameKind kind) {
    switch (kind) {
    case FrameKind::Reqa: return "REQA";
    case FrameKind::Atqa: return "ATQA";
    case FrameKind::Select: return "SELECT";
    case FrameKind::UidResponse: return "UID_RESPONSE";
    case FrameKind::Halt: return "HALT";
    }
    return "?";
}

} // namespace clipcard
