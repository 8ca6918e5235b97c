#pragma once

#include <istream>
#include <vector>

#include "clipcard/config.hpp"
#include "clipcard/events.hpp"
#include "clipcard/fingerprint.hpp"

namespace clipcard {

/// Runs a scripted session against one card+reader world and returns the
/// event trace. Steps, one per line (blank lines and '#' comments skipped):
///
///   scan <label> live|film
///   wait <ms>
///   interrogate <distance_mm> <angle_deg>
///   tamper cable_bridge|voltage_injection_5v
///   reset
///
/// Unknown steps and unknown labels are validation errors.
std::vector<AccessEvent> run_script(const SimulationConfig& cfg, const TemplateStore& store,
                                    std::istream& script);

} // namespace clipcard
