#pragma once

// Structured-text configuration: key=value entries grouped in [sections].
// Frequencies are entered as ordinary frequencies (MHz/GHz) and stored as
// angular frequencies; interaction strengths are entered in units of epsilon.
// Unknown sections or keys are errors.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydgate/physics.hpp"

namespace rydgate {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct SweepSettings {
    std::optional<std::string> experiment;
    std::optional<int> points;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<bool> log_spaced;
    std::vector<double> x_max_list;
    std::optional<int> workers;
};

struct RunConfig {
    PhysParams params;
    SweepSettings sweep;
    bool used_preset = false;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

// The rb87 preset in config-file form, with derived scales as comments;
// parsing the output reproduces the preset.
std::string preset_dump_text(int n_atoms = 1);

}  // namespace rydgate
