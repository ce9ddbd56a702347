#pragma once

// Records and their CSV / JSON-lines serialization.  Doubles are written in
// the shortest form that round-trips.

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rabitherm::cli {

using Value = std::variant<double, std::int64_t, std::string>;

struct Record {
    std::vector<std::pair<std::string, Value>> fields;

    Record& add(std::string name, double v) { return push(std::move(name), Value(v)); }
    Record& add(std::string name, int v) { return push(std::move(name), Value(std::int64_t{v})); }
    Record& add(std::string name, std::int64_t v) { return push(std::move(name), Value(v)); }
    Record& add(std::string name, std::size_t v) {
        return push(std::move(name), Value(static_cast<std::int64_t>(v)));
    }
    Record& add(std::string name, bool v) { return push(std::move(name), Value(std::int64_t{v})); }
    Record& add(std::string name, std::string v) { return push(std::move(name), Value(std::move(v))); }
    Record& add(std::string name, const char* v) { return push(std::move(name), Value(std::string(v))); }

private:
    Record& push(std::string name, Value v) {
        fields.emplace_back(std::move(name), std::move(v));
        return *this;
    }
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

enum class Format { Csv, Jsonl };

inline Format parse_format(const std::string& s) {
    if (s == "csv") return Format::Csv;
    if (s == "jsonl") return Format::Jsonl;
    throw std::invalid_argument("format must be csv or jsonl");
}

/// Single ordered writer.  All records of one stream must share a column set.
class RecordSink {
public:
    RecordSink(std::ostream& out, Format format) : out_(out), format_(format) {}

    void write(const Record& r) {
        if (format_ == Format::Csv) {
            write_csv(r);
        } else {
            write_json(r);
        }
        ++count_;
    }
    std::size_t count() const { return count_; }

private:
    void write_csv(const Record& r) {
        if (columns_.empty()) {
            for (std::size_t i = 0; i < r.fields.size(); ++i) {
                columns_.push_back(r.fields[i].first);
                out_ << (i ? "," : "") << csv_escape(r.fields[i].first);
            }
            out_ << '\n';
        }
        if (r.fields.size() != columns_.size()) {
            throw std::logic_error("record column set differs from header");
        }
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            if (r.fields[i].first != columns_[i]) {
                throw std::logic_error("record column '" + r.fields[i].first + "' out of order");
            }
            out_ << (i ? "," : "");
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out_ << format_double(v);
                    } else if constexpr (std::is_same_v<T, std::int64_t>) {
                        out_ << v;
                    } else {
                        out_ << csv_escape(v);
                    }
                },
                r.fields[i].second);
        }
        out_ << '\n';
    }

    void write_json(const Record& r) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (const auto& [name, value] : r.fields) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        if (std::isfinite(v)) {
                            obj[name] = v;
                        } else {
                            obj[name] = nullptr;
                        }
                    } else {
                        obj[name] = v;
                    }
                },
                value);
        }
        out_ << obj.dump() << '\n';
    }

    std::ostream& out_;
    Format format_;
    std::vector<std::string> columns_;
    std::size_t count_ = 0;
};

}  // namespace rabitherm::cli
