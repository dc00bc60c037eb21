#include "flowcap/kv_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flowcap/errors.hpp"

namespace flowcap {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view key) {
    if (key.empty())
        return false;
    for (char c : key) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '.' || c == '-';
        if (!ok)
            return false;
    }
    return true;
}

std::string join(std::string_view prefix, std::string_view key) {
    std::string out(prefix);
    if (!out.empty() && out.back() != '.')
        out += '.';
    out += key;
    return out;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty())
        return std::nullopt;
    return value;
}

std::vector<double> parse_double_list(std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty())
        return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        const auto value = parse_double(item);
        if (!value)
            throw InvalidParameters("not a number: '" + std::string(trim(item)) + "'");
        out.push_back(*value);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text, std::string_view origin) {
    KeyValueConfig config;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        ++line_no;
        const auto line = trim(raw);
        if (!line.empty() && line.front() != '#') {
            const auto eq = line.find('=');
            const auto key = eq == std::string_view::npos ? line : trim(line.substr(0, eq));
            if (eq == std::string_view::npos || !valid_key(key)) {
                throw ConfigError("", std::string(origin) + ":" + std::to_string(line_no) +
                                          ": expected 'key = value', got '" + std::string(line) +
                                          "'");
            }
            config.set(std::string(key), std::string(trim(line.substr(eq + 1))));
        }
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    return config;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

void KeyValueConfig::set(std::string key, std::string value) {
    entries_.insert_or_assign(std::move(key), std::move(value));
}

void KeyValueConfig::apply_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("", "override '" + std::string(assignment) + "' is not key=value");
    const auto key = trim(assignment.substr(0, eq));
    if (!valid_key(key))
        throw ConfigError("", "override '" + std::string(assignment) + "' has an invalid key");
    set(std::string(key), std::string(trim(assignment.substr(eq + 1))));
}

void KeyValueConfig::merge(const KeyValueConfig& other) {
    for (const auto& [k, v] : other.entries_)
        entries_.insert_or_assign(k, v);
}

void KeyValueConfig::erase(std::string_view key) {
    if (auto it = entries_.find(key); it != entries_.end())
        entries_.erase(it);
}

bool KeyValueConfig::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

std::optional<std::string> KeyValueConfig::get(std::string_view key) const {
    if (auto it = entries_.find(key); it != entries_.end())
        return it->second;
    return std::nullopt;
}

std::optional<double> KeyValueConfig::get_double(std::string_view key) const {
    const auto text = get(key);
    if (!text)
        return std::nullopt;
    const auto value = parse_double(*text);
    if (!value || !std::isfinite(*value))
        throw ConfigError(std::string(key), "expected a finite number, got '" + *text + "'");
    return value;
}

double KeyValueConfig::get_double(std::string_view key, double fallback) const {
    return get_double(key).value_or(fallback);
}

double KeyValueConfig::require_double(std::string_view key) const {
    const auto value = get_double(key);
    if (!value)
        throw ConfigError(std::string(key), "required setting is missing");
    return *value;
}

std::optional<std::uint64_t> KeyValueConfig::get_uint(std::string_view key) const {
    const auto text = get(key);
    if (!text)
        return std::nullopt;
    const auto s = trim(*text);
    std::uint64_t value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty())
        throw ConfigError(std::string(key), "expected a non-negative integer, got '" + *text + "'");
    return value;
}

std::uint64_t KeyValueConfig::get_uint(std::string_view key, std::uint64_t fallback) const {
    return get_uint(key).value_or(fallback);
}

std::vector<double> KeyValueConfig::get_double_list(std::string_view key) const {
    const auto text = get(key);
    if (!text)
        return {};
    try {
        return parse_double_list(*text);
    } catch (const InvalidParameters& e) {
        throw ConfigError(std::string(key), e.what());
    }
}

std::vector<std::string> KeyValueConfig::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_)
        out.push_back(k);
    return out;
}

std::string KeyValueConfig::to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

DistributionFamily parse_family(std::string_view name) {
    name = trim(name);
    for (auto family : {DistributionFamily::Deterministic, DistributionFamily::Exponential,
                        DistributionFamily::LogNormal, DistributionFamily::ParetoTypeI}) {
        if (family_name(family) == name)
            return family;
    }
    throw InvalidParameters("unknown distribution family '" + std::string(name) +
                            "' (expected deterministic, exponential, lognormal or pareto)");
}

namespace {

DistributionSpec distribution_from_config(const KeyValueConfig& config, const std::string& base) {
    const auto family_key = base + ".family";
    const auto params_key = base + ".params";
    const auto family_text = config.get(family_key);
    if (!family_text)
        throw ConfigError(family_key, "required setting is missing");
    if (!config.contains(params_key))
        throw ConfigError(params_key, "required setting is missing");
    DistributionFamily family;
    try {
        family = parse_family(*family_text);
    } catch (const InvalidParameters& e) {
        throw ConfigError(family_key, e.what());
    }
    const auto params = config.get_double_list(params_key);
    try {
        return DistributionSpec::from_params(family, params);
    } catch (const InvalidParameters& e) {
        throw ConfigError(params_key, e.what());
    }
}

} // namespace

TrafficModel traffic_model_from_config(const KeyValueConfig& config, std::string_view prefix) {
    TrafficModel model;
    const auto lambda_key = join(prefix, "lambda");
    model.lambda = config.require_double(lambda_key);
    if (model.lambda < 0.0)
        throw ConfigError(lambda_key, "arrival rate must be >= 0, got " + format_double(model.lambda));
    model.size_dist = distribution_from_config(config, join(prefix, "size"));
    model.duration_dist = distribution_from_config(config, join(prefix, "duration"));
    const auto profile_key = join(prefix, "profile");
    if (const auto profile = config.get(profile_key); profile && trim(*profile) != "constant")
        throw ConfigError(profile_key, "only 'constant' rate profiles are supported, got '" + *profile + "'");
    return model;
}

void traffic_model_to_config(const TrafficModel& model, KeyValueConfig& config, std::string_view prefix) {
    auto params_text = [](const DistributionSpec& d) {
        std::string out;
        for (double p : d.params()) {
            if (!out.empty())
                out += ',';
            out += format_double(p);
        }
        return out;
    };
    config.set(join(prefix, "lambda"), format_double(model.lambda));
    config.set(join(prefix, "size.family"), std::string(family_name(model.size_dist.family())));
    config.set(join(prefix, "size.params"), params_text(model.size_dist));
    config.set(join(prefix, "duration.family"), std::string(family_name(model.duration_dist.family())));
    config.set(join(prefix, "duration.params"), params_text(model.duration_dist));
    config.set(join(prefix, "profile"), "constant");
}

} // namespace flowcap
