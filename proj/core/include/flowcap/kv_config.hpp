#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flowcap/traffic_model.hpp"

namespace flowcap {

/// Flat `key = value` text configuration. Lines starting with '#' and blank
/// lines are ignored; keys are dotted identifiers. Later assignments win.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    /// Throws ConfigError naming the line for anything that is not `k = v`.
    static KeyValueConfig parse(std::string_view text, std::string_view origin = "<config>");
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(std::string key, std::string value);
    /// Applies a `key=value` command-line assignment.
    void apply_assignment(std::string_view assignment);
    void merge(const KeyValueConfig& other);
    void erase(std::string_view key);

    bool contains(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;

    std::optional<double> get_double(std::string_view key) const;
    double get_double(std::string_view key, double fallback) const;
    double require_double(std::string_view key) const;
    std::optional<std::uint64_t> get_uint(std::string_view key) const;
    std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(std::string_view key) const;

    std::vector<std::string> keys() const;
    /// Sorted `key = value` lines, one per entry.
    std::string to_string() const;

    friend bool operator==(const KeyValueConfig&, const KeyValueConfig&) = default;

private:
    std::map<std::string, std::string, std::less<>> entries_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);
/// Strict full-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

DistributionFamily parse_family(std::string_view name);

/// Reads the traffic model keys `lambda`, `size.family`, `size.params`,
/// `duration.family`, `duration.params`, `profile`, each under `prefix`.
/// Errors are ConfigError naming the full key.
TrafficModel traffic_model_from_config(const KeyValueConfig& config, std::string_view prefix = "");
void traffic_model_to_config(const TrafficModel& model, KeyValueConfig& config,
                             std::string_view prefix = "");

} // namespace flowcap
