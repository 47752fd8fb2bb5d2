#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatsharp/detail/format.hpp"
#include "heatsharp/errors.hpp"

namespace heatsharp {

enum class Verdict { pass, fail, informational };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "informational";
    }
}

struct ExperimentRow {
    double abscissa;
    double value;
    std::optional<double> bound;
};

/// One experiment's full result: named rows over a strictly increasing
/// abscissa, string params in insertion order, one headline tolerance,
/// and the verdict. Serialization is deterministic byte for byte.
struct ExperimentRecord {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
    double tolerance = 0.0;
    Verdict verdict = Verdict::informational;
    std::vector<ExperimentRow> rows;

    void add_param(std::string key, std::string value) {
        params.emplace_back(std::move(key), std::move(value));
    }
    void add_param(std::string key, double value) {
        params.emplace_back(std::move(key), detail::fmt_double(value));
    }

    void validate() const {
        if (name.empty()) throw DomainError("record needs a name");
        if (rows.empty()) throw DomainError("record '" + name + "' has no rows");
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].abscissa > rows[i - 1].abscissa))
                throw DomainError("record '" + name + "' abscissae must increase strictly");
    }

    std::string to_json() const {
        validate();
        detail::JsonWriter w;
        w.begin_object();
        w.key("name").value(name);
        w.key("params").begin_object();
        for (const auto& [k, v] : params) w.key(k).value(v);
        w.end_object();
        w.key("tolerance").value(tolerance);
        w.key("verdict").value(verdict_name(verdict));
        w.key("rows").begin_array();
        for (const auto& row : rows) {
            w.begin_object();
            w.key("abscissa").value(row.abscissa);
            w.key("value").value(row.value);
            w.key("bound");
            if (row.bound) w.value(*row.bound);
            else w.value_null();
            w.end_object();
        }
        w.end_array();
        w.end_object();
        return w.str();
    }

    /// Rows only; params travel in the JSON form.
    std::string to_csv() const {
        validate();
        std::string out = "abscissa,value,bound\n";
        for (const auto& row : rows) {
            out += detail::fmt_double(row.abscissa);
            out += ',';
            out += detail::fmt_double(row.value);
            out += ',';
            if (row.bound) out += detail::fmt_double(*row.bound);
            out += '\n';
        }
        return out;
    }
};

} // namespace heatsharp
