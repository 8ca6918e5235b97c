#include "clipcard/events.hpp"

namespace clipcard {

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::ScanAccepted: return "scan_accepted";
    case EventKind::ScanRejected: return "scan_rejected";
    case EventKind::JointClosed: return "joint_closed";
    case EventKind::JointOpened: return "joint_opened";
    case EventKind::Timeout: return "timeout";
    case EventKind::Tamper: return "tamper";
    case EventKind::Alarm: return "alarm";
    case EventKind::Response: return "response";
    case EventKind::AccessGranted: return "access_granted";
    case EventKind::AccessDenied: return "access_denied";
    case EventKind::Reset: return "reset";
    }
    return "?";
}

std::string to_line(const AccessEvent& ev) {
    return "t=" + std::to_string(ev.t_ms) + " kind=" + to_string(ev.kind) +
           " detail=" + ev.detail;
}

void append(std::vector<AccessEvent>& trace, std::vector<AccessEvent> more) {
    for (auto& ev : more)
        trace.push_back(std::move(ev));
}

} // namespace clipcard
