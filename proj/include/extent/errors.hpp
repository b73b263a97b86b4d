#ifndef EXTENT_ERRORS_HPP
#define EXTENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace extent {

// Bad numeric input (out of the mathematical domain of a formula).
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Input falls outside the operating regime a model is valid in.
class regime_error : public std::runtime_error {
public:
    explicit regime_error(const std::string& what) : std::runtime_error(what) {}
};

// Caller misuse: bad arguments, mismatched widths, unknown keys/flags.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// Syntax error in a trace or config file; carries the location.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line, int column)
        : std::runtime_error(what + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column)),
          line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A calibration target cannot be bracketed or reached.
class calibration_error : public std::runtime_error {
public:
    explicit calibration_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace extent

#endif
