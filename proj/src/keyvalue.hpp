#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace corr1d {

// Flat key-value run configuration (TOML-syntax subset): one `key = value`
// per line, `#` comments, quoted strings, numbers, booleans and one-level
// arrays of numbers.  Parsing is strict: every key present in the file must
// be consumed by the experiment, and finalize() rejects leftovers with
// line diagnostics.
class KeyValueFile {
public:
    struct Value {
        enum class Kind { Number, String, Boolean, NumberArray } kind;
        double number = 0.0;
        std::string string;
        bool boolean = false;
        std::vector<double> array;
        int line = 0;
    };

    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_text(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    // Typed accessors; `require_*` throw ConfigError when missing, the
    // `get_*` forms fall back to a default and record the key as defaulted.
    double require_number(const std::string& key);
    double get_number(const std::string& key, double fallback);
    long require_integer(const std::string& key);
    long get_integer(const std::string& key, long fallback);
    std::string require_string(const std::string& key);
    std::string get_string(const std::string& key, const std::string& fallback);
    bool get_boolean(const std::string& key, bool fallback);
    std::vector<double> get_number_array(const std::string& key, std::vector<double> fallback);

    // Keys read with a fallback that was actually absent from the file.
    const std::map<std::string, std::string>& defaulted() const { return defaulted_; }

    // Raw key/value echo for the run manifest.
    const std::map<std::string, Value>& entries() const { return values_; }

    // Throws ConfigError if any key was never consumed.
    void finalize() const;

private:
    const Value& fetch(const std::string& key, Value::Kind kind);

    std::string origin_;
    std::map<std::string, Value> values_;
    std::set<std::string> consumed_;
    std::map<std::string, std::string> defaulted_;
};

}  // namespace corr1d
