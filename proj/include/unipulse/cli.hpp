#pragma once

#include "unipulse/fields.hpp"
#include "unipulse/waveforms.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace unipulse::cli {

enum ExitCode : int { ok = 0, config_error = 2, numeric_failure = 3, check_failed = 4 };

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Which closed-form field a command evaluates.
enum class FieldKind { quasi_spherical, simple_pulse, spherical_reference };

struct RunConfig {
  std::string command;
  PulseParams pulse;
  std::string waveform_descriptor;
  WaveformPtr waveform;
  FieldKind field = FieldKind::quasi_spherical;
  double b_ref = 0.0;
  std::optional<std::string> output;
  //! The command's own block, already checked for unknown keys.
  nlohmann::json block;
};

struct KeyDoc {
  std::string key;
  std::string doc;
};

//! Commands understood by the tool, in display order.
const std::vector<std::string> &command_names();
std::string command_summary(const std::string &command);
//! Every config key the command reads, with a short description.
std::vector<KeyDoc> config_keys(const std::string &command);

//! Parses and validates a JSON config for a command. Throws ConfigError
//! naming the line (syntax errors) or the JSON path (field errors).
RunConfig parse_config(const std::string &text, const std::string &command);
RunConfig load_config(const std::string &path, const std::string &command);

FieldEvaluator make_evaluator(const RunConfig &cfg);
std::string to_string(FieldKind kind);

struct RunOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

//! Runs one command. Primary output goes to the configured file (or `out`
//! when no file is configured); diagnostics to `err`. Returns the exit code.
int run_command(const std::string &command, const std::string &config_path,
                const RunOptions &opts, std::ostream &out, std::ostream &err);

} // namespace unipulse::cli
