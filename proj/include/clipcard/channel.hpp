#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace clipcard {

/// Near-field link constants. k0 is the coupling at contact, d0 the knee of
/// the inverse-cube falloff, k_min the weakest coupling that still powers the
/// tag.
struct ChannelConfig {
    double k0 = 0.6;
    double d0_mm = 40.0;
    double k_min = 0.05;
};

/// Reader/card placement. angle is between the coil planes; lateral_offset is
/// carried for trace purposes but does not enter the coupling model.
struct LinkConditions {
    double distance_mm = 0.0;
    double angle_deg = 0.0;
    double lateral_offset_mm = 0.0;

    void validate() const;
};

enum class FrameDirection { ReaderToCard, CardToReader };

enum class FrameKind { Reqa, Atqa, Select, UidResponse, Halt };

constexpr std::size_t kMaxFramePayload = 32;

struct Frame {
    FrameDirection direction = FrameDirection::ReaderToCard;
    FrameKind kind = FrameKind::Reqa;
    std::vector<std::uint8_t> payload;

    void validate() const;
};

/// k = k0 * cos(angle) / (1 + (distance/d0)^3), in [0,1]; non-increasing in
/// both distance and angle.
[[nodiscard]] double coupling_coefficient(const LinkConditions& link,
                                          const ChannelConfig& cfg = {});

/// True iff the joint gate is nonzero and the coupling reaches k_min. A zero
/// gate means no power regardless of coupling.
[[nodiscard]] bool tag_powered(double k, long long gate_value, double k_min = 0.05);

/// Delivers the frame unchanged when the tag is powered under these link
/// conditions, absent otherwise. Never a partial frame.
[[nodiscard]] std::optional<Frame> transmit(const Frame& frame, const LinkConditions& link,
                                            long long gate_value, const ChannelConfig& cfg = {});

const char* to_string(FrameKind kind);

} // namespace clipcard
