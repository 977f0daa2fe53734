#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace jetext {

// Double -> shortest fixed string at 17 significant digits (%.17g).
std::string format_double(double v);

// Deterministic JSON emitter: insertion order preserved, doubles at 17
// significant digits, so identical inputs produce byte-identical reports.
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view k);
    JsonWriter& value(double v);
    JsonWriter& value(int v);
    JsonWriter& value(int64_t v);
    JsonWriter& value(size_t v);
    JsonWriter& value(bool v);
    JsonWriter& value(std::string_view v);
    JsonWriter& kv(std::string_view k, double v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, int v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, int64_t v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, size_t v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, bool v) { return key(k).value(v); }
    JsonWriter& kv(std::string_view k, std::string_view v) { return key(k).value(v); }

    const std::string& str() const { return out_; }

private:
    void pre_value();

    std::string out_;
    std::vector<char> stack_;   // 'o' or 'a'
    bool needs_comma_ = false;
    bool after_key_ = false;
};

}  // namespace jetext
