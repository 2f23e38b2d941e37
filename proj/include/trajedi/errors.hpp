#ifndef TRAJEDI_ERRORS_HPP
#define TRAJEDI_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trajedi {

/// A caller violated a precondition (bad index, bad parameter, bad config key).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data could not be parsed. `line()` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what)
        , line_(line)
    {}

    /// Same error with `context` (e.g. a file name) prepended to the message.
    ParseError(const std::string& context, const ParseError& inner)
        : std::runtime_error(context + ": " + inner.what())
        , line_(inner.line_)
    {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An internal invariant was broken. Indicates a bug, not bad input.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace trajedi

#endif // TRAJEDI_ERRORS_HPP
