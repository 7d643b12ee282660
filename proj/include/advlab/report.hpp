#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "advlab/attacks.hpp"
#include "advlab/image.hpp"
#include "advlab/robustness.hpp"
#include "advlab/transfer.hpp"
#include "advlab/version.hpp"

namespace advlab {

/// Reports are JSON documents written by a fixed-format serializer so that
/// reruns with identical inputs are byte-identical: objects keep insertion
/// order, floating-point numbers carry 9 significant digits, and integers
/// print as integers. Parsing is strict (unknown envelope keys rejected) and
/// parse -> serialize round-trips bytes exactly.

/// Canonical two-space-indented rendering with a trailing newline.
std::string dump_report(const nlohmann::ordered_json& doc);

/// Strict parse of a report document: the envelope must carry exactly
/// {tool_version, command, config, started_at, duration_seconds, payload}.
nlohmann::ordered_json parse_report(const std::string& text);

/// Envelope skeleton in canonical key order. started_at/duration_seconds are
/// null unless the caller stamps them (reruns must match byte-for-byte, so
/// wall-clock data is opt-in).
nlohmann::ordered_json make_envelope(const std::string& command,
                                     nlohmann::ordered_json config,
                                     nlohmann::ordered_json payload,
                                     std::optional<std::string> started_at = std::nullopt,
                                     std::optional<double> duration_seconds = std::nullopt);

nlohmann::ordered_json to_json(const AttackConfig& config);
AttackConfig attack_config_from_json(const nlohmann::ordered_json& j);

/// Pixel payload {channels, height, width, pixels}.
nlohmann::ordered_json to_json(const Image& img);
Image image_from_json(const nlohmann::ordered_json& j);

/// Full result record including both pixel arrays (the perturbation is
/// their difference and is not stored).
nlohmann::ordered_json to_json(const AttackResult& result, const std::string& image_id);
AttackResult attack_result_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const ThresholdReport& report);
nlohmann::ordered_json to_json(const DetectionProxyReport& report);
nlohmann::ordered_json to_json(const TransferMatrix& matrix);
nlohmann::ordered_json to_json(const TransferRecord& record);
nlohmann::ordered_json to_json(const MultiAttackResult& result);

}  // namespace advlab
