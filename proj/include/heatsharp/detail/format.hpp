#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace heatsharp::detail {

/// Round-trippable decimal for a double (17 significant digits);
/// infinities render as "inf"/"-inf" so serialized output never depends
/// on libc spelling.
inline std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

/// Minimal streaming JSON writer with caller-controlled field order.
/// Numbers are emitted with fmt_double; non-finite values are emitted as
/// quoted strings so the output stays parseable.
class JsonWriter {
public:
    JsonWriter& begin_object() {
        item_prefix();
        out_ += '{';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_object() {
        stack_.pop_back();
        out_ += '}';
        return *this;
    }
    JsonWriter& begin_array() {
        item_prefix();
        out_ += '[';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_array() {
        stack_.pop_back();
        out_ += ']';
        return *this;
    }
    JsonWriter& key(std::string_view k) {
        item_prefix();
        out_ += '"';
        out_ += json_escape(k);
        out_ += "\":";
        expecting_value_ = true;
        return *this;
    }
    JsonWriter& value(double v) {
        item_prefix();
        if (std::isfinite(v)) {
            out_ += fmt_double(v);
        } else {
            out_ += '"';
            out_ += fmt_double(v);
            out_ += '"';
        }
        return *this;
    }
    JsonWriter& value(std::string_view s) {
        item_prefix();
        out_ += '"';
        out_ += json_escape(s);
        out_ += '"';
        return *this;
    }
    JsonWriter& value(const char* s) { return value(std::string_view(s)); }
    JsonWriter& value(bool b) {
        item_prefix();
        out_ += b ? "true" : "false";
        return *this;
    }
    JsonWriter& value(std::size_t n) {
        item_prefix();
        out_ += std::to_string(n);
        return *this;
    }
    JsonWriter& value_null() {
        item_prefix();
        out_ += "null";
        return *this;
    }

    const std::string& str() const { return out_; }

private:
    void item_prefix() {
        if (expecting_value_) {
            expecting_value_ = false;
            return;
        }
        if (!stack_.empty()) {
            if (stack_.back()) out_ += ',';
            else stack_.back() = true;
        }
    }

    std::string out_;
    std::vector<bool> stack_;
    bool expecting_value_ = false;
};

} // namespace heatsharp::detail
