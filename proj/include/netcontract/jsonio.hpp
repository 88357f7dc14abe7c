/**
 * @file jsonio.hpp
 * @brief Deterministic JSON emission (17 significant digits, insertion-order
 *        keys) and the 12-digit CSV number format used by the CLI.
 */
#pragma once

#include <string>
#include <vector>

namespace netcontract::jsonio {

/// Formats a double with 17 significant digits (exact round trip).
std::string num17(double x);

/// Formats a double with 12 significant digits (CSV readability).
std::string num12(double x);

/// JSON string escaping, quotes included.
std::string quoted(const std::string& s);

/// Minimal streaming JSON writer. The caller is responsible for pairing
/// begin/end calls; keys apply to the next value inside an object.
class Writer {
public:
    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& k);
    void value(double x);
    void value(int x);
    void value(long long x);
    void value(bool b);
    void value(const char* s);
    void value(const std::string& s);
    void null();

    const std::string& str() const { return out_; }

private:
    void comma();

    std::string out_;
    std::vector<bool> first_;  // per open container: no element emitted yet
    bool pending_key_ = false;
};

}  // namespace netcontract::jsonio
