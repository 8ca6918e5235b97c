#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace clipcard {

/// Audit trace entries. The first seven kinds are emitted by the card itself;
/// the rest by the reader/harness side of a run.
enum class EventKind {
    ScanAccepted,
    ScanRejected,
    JointClosed,
    JointOpened,
    Timeout,
    Tamper,
    Alarm,
    Response,
    AccessGranted,
    AccessDenied,
    Reset,
};

struct AccessEvent {
    std::int64_t t_ms = 0;
    EventKind kind = EventKind::ScanRejected;
    std::string detail;
};

const char* to_string(EventKind kind);

/// `t=<ms> kind=<kind> detail=<text>`
std::string to_line(const AccessEvent& ev);

void append(std::vector<AccessEvent>& trace, std::vector<AccessEvent> more);

} // namespace clipcard
