#include "keyvalue.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace corr1d {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return {};
    return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = trim(text);
    if (t.empty()) return false;
    std::size_t used = 0;
    try {
        out = std::stod(t, &used);
    } catch (...) {
        return false;
    }
    return used == t.size();
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path);
}

KeyValueFile KeyValueFile::parse_text(const std::string& text, const std::string& origin) {
    KeyValueFile kv;
    kv.origin_ = origin;

    std::istringstream stream(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        // strip comments outside quotes
        std::string line;
        bool in_quotes = false;
        for (char ch : raw) {
            if (ch == '"') in_quotes = !in_quotes;
            if (ch == '#' && !in_quotes) break;
            line.push_back(ch);
        }
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value_text = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (kv.values_.count(key)) fail(origin, line_no, "duplicate key `" + key + "`");
        if (value_text.empty()) fail(origin, line_no, "missing value for `" + key + "`");

        Value value;
        value.line = line_no;
        if (value_text.front() == '"') {
            if (value_text.size() < 2 || value_text.back() != '"') {
                fail(origin, line_no, "unterminated string for `" + key + "`");
            }
            value.kind = Value::Kind::String;
            value.string = value_text.substr(1, value_text.size() - 2);
        } else if (value_text == "true" || value_text == "false") {
            value.kind = Value::Kind::Boolean;
            value.boolean = (value_text == "true");
        } else if (value_text.front() == '[') {
            if (value_text.back() != ']') fail(origin, line_no, "unterminated array for `" + key + "`");
            value.kind = Value::Kind::NumberArray;
            std::string body = value_text.substr(1, value_text.size() - 2);
            std::stringstream items(body);
            std::string item;
            while (std::getline(items, item, ',')) {
                double x;
                if (!parse_number(item, x)) {
                    fail(origin, line_no, "array element `" + trim(item) + "` is not a number");
                }
                value.array.push_back(x);
            }
            if (value.array.empty() && !trim(body).empty()) {
                fail(origin, line_no, "malformed array for `" + key + "`");
            }
        } else {
            value.kind = Value::Kind::Number;
            if (!parse_number(value_text, value.number)) {
                fail(origin, line_no, "value `" + value_text + "` is not a number, string, bool or array");
            }
        }
        kv.values_.emplace(key, std::move(value));
    }
    return kv;
}

const KeyValueFile::Value& KeyValueFile::fetch(const std::string& key, Value::Kind kind) {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing required key `" + key + "`");
    if (it->second.kind != kind) {
        fail(origin_, it->second.line, "key `" + key + "` has the wrong type");
    }
    consumed_.insert(key);
    return it->second;
}

double KeyValueFile::require_number(const std::string& key) {
    return fetch(key, Value::Kind::Number).number;
}

double KeyValueFile::get_number(const std::string& key, double fallback) {
    if (!has(key)) {
        defaulted_.emplace(key, std::to_string(fallback));
        return fallback;
    }
    return require_number(key);
}

long KeyValueFile::require_integer(const std::string& key) {
    const Value& v = fetch(key, Value::Kind::Number);
    const long n = static_cast<long>(std::llround(v.number));
    if (std::abs(v.number - static_cast<double>(n)) > 1e-9) {
        fail(origin_, v.line, "key `" + key + "` must be an integer");
    }
    return n;
}

long KeyValueFile::get_integer(const std::string& key, long fallback) {
    if (!has(key)) {
        defaulted_.emplace(key, std::to_string(fallback));
        return fallback;
    }
    return require_integer(key);
}

std::string KeyValueFile::require_string(const std::string& key) {
    return fetch(key, Value::Kind::String).string;
}

std::string KeyValueFile::get_string(const std::string& key, const std::string& fallback) {
    if (!has(key)) {
        defaulted_.emplace(key, fallback);
        return fallback;
    }
    return require_string(key);
}

bool KeyValueFile::get_boolean(const std::string& key, bool fallback) {
    if (!has(key)) {
        defaulted_.emplace(key, fallback ? "true" : "false");
        return fallback;
    }
    return fetch(key, Value::Kind::Boolean).boolean;
}

std::vector<double> KeyValueFile::get_number_array(const std::string& key,
                                                   std::vector<double> fallback) {
    if (!has(key)) {
        std::string echo = "[";
        for (std::size_t i = 0; i < fallback.size(); ++i) {
            echo += (i ? ", " : "") + std::to_string(fallback[i]);
        }
        defaulted_.emplace(key, echo + "]");
        return fallback;
    }
    return fetch(key, Value::Kind::NumberArray).array;
}

void KeyValueFile::finalize() const {
    std::string complaints;
    for (const auto& [key, value] : values_) {
        if (!consumed_.count(key)) {
            complaints += (complaints.empty() ? "" : "; ") + ("unknown key `" + key + "` (line " +
                                                              std::to_string(value.line) + ")");
        }
    }
    if (!complaints.empty()) throw ConfigError(origin_ + ": " + complaints);
}

}  // namespace corr1d
