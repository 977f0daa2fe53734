#include "jetext/report.hpp"

#include <cmath>
#include <cstdio>

namespace jetext {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void JsonWriter::pre_value() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (needs_comma_) out_ += ',';
}

JsonWriter& JsonWriter::begin_object() {
    pre_value();
    out_ += '{';
    stack_.push_back('o');
    needs_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    stack_.pop_back();
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    pre_value();
    out_ += '[';
    stack_.push_back('a');
    needs_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    stack_.pop_back();
    needs_comma_ = true;
    return *this;
}

static void append_escaped(std::string& out, std::string_view s) {
    out += '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

JsonWriter& JsonWriter::key(std::string_view k) {
    if (needs_comma_) out_ += ',';
    append_escaped(out_, k);
    out_ += ':';
    after_key_ = true;
    needs_comma_ = false;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    pre_value();
    out_ += format_double(v);
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(int v) {
    pre_value();
    out_ += std::to_string(v);
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(int64_t v) {
    pre_value();
    out_ += std::to_string(v);
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(size_t v) {
    pre_value();
    out_ += std::to_string(v);
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    pre_value();
    out_ += v ? "true" : "false";
    needs_comma_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view v) {
    pre_value();
    append_escaped(out_, v);
    needs_comma_ = true;
    return *this;
}

}  // namespace jetext
