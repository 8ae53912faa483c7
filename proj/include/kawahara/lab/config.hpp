#pragma once

// Flat `key = value` experiment configuration. Every key has a default; a
// file only lists what it overrides. Numbers accept products and quotients
// with `pi`, e.g. `64*pi` or `0.1/4096`.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kawahara/errors.hpp"
#include "kawahara/spectral.hpp"

namespace kawahara::lab {

enum class Kind { solve, verify_bilinear, counterexample, converge_pointwise, converge_uniform, truncate, strichartz_check };

inline constexpr std::array<std::pair<Kind, std::string_view>, 7> kind_names{{
    {Kind::solve, "solve"},
    {Kind::verify_bilinear, "verify-bilinear"},
    {Kind::counterexample, "counterexample"},
    {Kind::converge_pointwise, "converge-pointwise"},
    {Kind::converge_uniform, "converge-uniform"},
    {Kind::truncate, "truncate"},
    {Kind::strichartz_check, "strichartz-check"},
}};

inline std::string_view to_string(Kind k) {
    for (const auto& [kind, name] : kind_names)
        if (kind == k) return name;
    return "?";
}

inline Kind parse_kind(std::string_view name) {
    for (const auto& [kind, n] : kind_names)
        if (n == name) return kind;
    std::string known;
    for (const auto& [kind, n] : kind_names) known += (known.empty() ? "" : ", ") + std::string(n);
    throw InvalidParameters("unknown experiment kind '" + std::string(name) + "' (expected one of " + known + ")");
}

struct KeySpec {
    std::string_view name;
    std::string_view default_value;
};

/// Every accepted key and its default. An empty default means "derived".
inline constexpr std::array<KeySpec, 32> config_keys{{
    {"kind", ""},
    {"alpha", "1"},
    {"beta", "0"},
    {"L", "64*pi"},
    {"M", "4096"},
    {"dt", "1e-4"},
    {"T", "0.1"},
    {"record_every", "100"},
    {"dealias", "true"},
    {"nonlinear", "true"},
    {"s", "0.25"},
    {"epsilon", "0.1"},
    {"b", ""},
    {"s2", ""},
    {"D", "4"},
    {"seed", "1"},
    {"samples", "30"},
    {"data", "rough"},
    {"data_profile", "random-phase"},
    {"data_kmax", "8"},
    {"data_margin", "0.05"},
    {"data_amplitude", "1"},
    {"theorem", "full-range"},
    {"estimate", "all"},
    {"s_values", "-1,-0.875,-0.75,-0.625,-0.5,-0.375,-0.25,-0.125,0"},
    {"N_values", "16,32,64,128,256"},
    {"density", "16"},
    {"cutoffs", "32,64,128,256,512"},
    {"t_max", "0.1,0.05,0.025,0.0125,0.00625,0.003125,0.0015625"},
    {"lambda_fractions", "0.05,0.1,0.2,0.4"},
    {"bound_cutoffs", "1,2,4,8,16"},
    {"t_values", "0,0.01,0.005,0.0025,0.00125,0.000625,0.0003125,0.00015625"},
}};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline bool is_key(std::string_view name) {
    return std::any_of(config_keys.begin(), config_keys.end(), [&](const KeySpec& k) { return k.name == name; });
}

/// factor (('*' | '/') factor)*, factor = [+-] (number | pi)
inline double eval_number(std::string_view text, std::string_view key) {
    const std::string src = trim(text);
    auto fail = [&] { return InvalidParameters(std::string(key) + " must be a number (got '" + src + "')"); };
    if (src.empty()) throw fail();
    std::size_t pos = 0;
    auto factor = [&] {
        double sign = 1.0;
        while (pos < src.size() && (src[pos] == '-' || src[pos] == '+')) {
            if (src[pos] == '-') sign = -sign;
            ++pos;
        }
        if (src.compare(pos, 2, "pi") == 0) {
            pos += 2;
            return sign * pi;
        }
        double v = 0.0;
        const auto res = std::from_chars(src.data() + pos, src.data() + src.size(), v);
        if (res.ec != std::errc{}) throw fail();
        pos = static_cast<std::size_t>(res.ptr - src.data());
        return sign * v;
    };
    double value = factor();
    while (pos < src.size()) {
        const char op = src[pos++];
        if (op == '*') value *= factor();
        else if (op == '/') value /= factor();
        else throw fail();
    }
    if (!std::isfinite(value)) throw fail();
    return value;
}

}  // namespace detail

class ExperimentConfig {
public:
    ExperimentConfig() {
        for (const auto& k : config_keys) values_[std::string(k.name)] = std::string(k.default_value);
    }

    static ExperimentConfig parse(std::string_view text) {
        ExperimentConfig cfg;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const std::string body = detail::trim(line);
            if (body.empty()) continue;
            const auto eq = body.find('=');
            if (eq == std::string::npos)
                throw InvalidParameters("line " + std::to_string(lineno) + ": expected 'key = value'");
            const std::string key = detail::trim(std::string_view(body).substr(0, eq));
            const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
            if (!detail::is_key(key)) throw InvalidParameters("unknown config key '" + key + "'");
            cfg.values_[key] = value;
            cfg.overridden_.push_back(key);
        }
        return cfg;
    }

    static ExperimentConfig load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InvalidParameters("cannot read config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    void set(const std::string& key, const std::string& value) {
        if (!detail::is_key(key)) throw InvalidParameters("unknown config key '" + key + "'");
        values_[key] = value;
    }

    const std::string& text(const std::string& key) const { return values_.at(key); }
    bool has(const std::string& key) const { return !values_.at(key).empty(); }

    double number(const std::string& key) const { return detail::eval_number(text(key), key); }

    double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 9.0e15) throw InvalidParameters(key + " must be an integer");
        return static_cast<std::int64_t>(v);
    }

    std::size_t count(const std::string& key) const {
        const auto v = integer(key);
        if (v < 1) throw InvalidParameters(key + " must be at least 1");
        return static_cast<std::size_t>(v);
    }

    bool flag(const std::string& key) const {
        const std::string& v = text(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw InvalidParameters(key + " must be true or false");
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::string item;
        std::istringstream in(text(key));
        while (std::getline(in, item, ',')) out.push_back(detail::eval_number(item, key));
        if (out.empty()) throw InvalidParameters(key + " must list at least one value");
        return out;
    }

    /// Every key with its effective text, in key order.
    const std::map<std::string, std::string>& values() const { return values_; }
    const std::vector<std::string>& overridden() const { return overridden_; }

    /// Canonical `key = value` lines, the input of the run hash.
    std::string canonical() const {
        std::string out;
        for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    std::vector<std::string> overridden_;
};

}  // namespace kawahara::lab
