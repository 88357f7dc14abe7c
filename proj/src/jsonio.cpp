/**
 * @file jsonio.cpp
 * @brief JSON/CSV number formatting and the streaming JSON writer.
 */
#include "netcontract/jsonio.hpp"

#include <cmath>
#include <cstdio>

namespace netcontract::jsonio {

namespace {

std::string fmt(double x, const char* spec) {
    if (std::isnan(x)) return "null";
    if (std::isinf(x)) return x > 0 ? "1e999" : "-1e999";  // JSON has no inf; parse clamps
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

}  // namespace

std::string num17(double x) { return fmt(x, "%.17g"); }

std::string num12(double x) { return fmt(x, "%.12g"); }

std::string quoted(const std::string& s) {
    std::string out = "\"";
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
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

void Writer::comma() {
    if (pending_key_) {
        pending_key_ = false;
        return;  // key already emitted the separator
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

void Writer::begin_object() {
    comma();
    out_ += '{';
    first_.push_back(true);
}

void Writer::end_object() {
    out_ += '}';
    first_.pop_back();
}

void Writer::begin_array() {
    comma();
    out_ += '[';
    first_.push_back(true);
}

void Writer::end_array() {
    out_ += ']';
    first_.pop_back();
}

void Writer::key(const std::string& k) {
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
    out_ += quoted(k);
    out_ += ':';
    pending_key_ = true;
}

void Writer::value(double x) {
    comma();
    out_ += num17(x);
}

void Writer::value(int x) {
    comma();
    out_ += std::to_string(x);
}

void Writer::value(long long x) {
    comma();
    out_ += std::to_string(x);
}

void Writer::value(bool b) {
    comma();
    out_ += b ? "true" : "false";
}

void Writer::value(const char* s) {
    comma();
    out_ += quoted(s);
}

void Writer::value(const std::string& s) {
    comma();
    out_ += quoted(s);
}

void Writer::null() {
    comma();
    out_ += "null";
}

}  // namespace netcontract::jsonio
