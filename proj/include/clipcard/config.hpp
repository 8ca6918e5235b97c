#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "clipcard/antenna.hpp"
#include "clipcard/card.hpp"
#include "clipcard/channel.hpp"
#include "clipcard/reader.hpp"

namespace clipcard {

/// Sensor noise applied to scripted scans.
struct SensorModel {
    double noise_stddev = 0.015;
    double dropout_probability = 0.0;
};

/// Everything a simulation run needs. The seed is mandatory: there is no
/// wall-clock fallback anywhere.
struct SimulationConfig {
    std::uint64_t seed = 0;
    std::filesystem::path store_path;
    CardConfig card;
    ChannelConfig channel;
    SensorModel sensor;
    AccessControlList acl;
};

/// Loads a config document. Relative paths are resolved against the config
/// file's directory; referenced files must exist. Throws ValidationError.
SimulationConfig load_config(const std::filesystem::path& file);

AntennaGeometry load_geometry(const std::filesystem::path& file);

} // namespace clipcard
