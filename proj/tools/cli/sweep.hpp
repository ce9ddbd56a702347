#pragma once

// Sweep axes: a bare value, a comma list, or MIN:MAX:COUNT[:log].

#include "rabitherm/spin_algebra.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rabitherm::cli {

struct Axis {
    std::string name;
    std::vector<double> values;
};

inline double parse_number(std::string_view text, std::string_view what) {
    const std::string str(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(str, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != str.size() || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + ": '" + str + "' is not a finite number");
    }
    return value;
}

inline std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

inline Axis parse_axis(std::string name, std::string_view text) {
    Axis axis{std::move(name), {}};
    if (text.find(':') != std::string_view::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3 && parts.size() != 4) {
            throw std::invalid_argument(axis.name + ": range must be MIN:MAX:COUNT[:log]");
        }
        const double lo = parse_number(parts[0], axis.name);
        const double hi = parse_number(parts[1], axis.name);
        const double count_d = parse_number(parts[2], axis.name);
        if (count_d != std::floor(count_d) || count_d < 2 || count_d > 1e7) {
            throw std::invalid_argument(axis.name + ": COUNT must be an integer >= 2");
        }
        const bool log_scale = parts.size() == 4;
        if (log_scale && parts[3] != "log") {
            throw std::invalid_argument(axis.name + ": fourth range field must be 'log'");
        }
        if (!(hi > lo)) {
            throw std::invalid_argument(axis.name + ": range needs MAX > MIN");
        }
        if (log_scale && !(lo > 0.0)) {
            throw std::invalid_argument(axis.name + ": log range needs MIN > 0");
        }
        const auto count = static_cast<std::size_t>(count_d);
        axis.values.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
            double v = log_scale ? lo * std::pow(hi / lo, frac) : lo + (hi - lo) * frac;
            if (i == count - 1) v = hi;
            axis.values.push_back(v);
        }
        return axis;
    }
    for (const auto part : split(text, ',')) {
        axis.values.push_back(parse_number(part, axis.name));
    }
    return axis;
}

inline std::vector<SpinQuantumNumber> parse_spin_list(std::string_view text) {
    std::vector<SpinQuantumNumber> out;
    for (const auto part : split(text, ',')) {
        out.push_back(SpinQuantumNumber::parse(part));
    }
    return out;
}

/// Row-major Cartesian product; the last axis varies fastest.
class Grid {
public:
    explicit Grid(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
        size_ = 1;
        for (auto e : extents_) size_ *= e;
    }
    std::size_t size() const { return size_; }
    std::vector<std::size_t> unravel(std::size_t index) const {
        std::vector<std::size_t> out(extents_.size());
        for (std::size_t k = extents_.size(); k-- > 0;) {
            out[k] = index % extents_[k];
            index /= extents_[k];
        }
        return out;
    }

private:
    std::vector<std::size_t> extents_;
    std::size_t size_;
};

}  // namespace rabitherm::cli
