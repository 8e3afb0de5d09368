#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corpusforge {

/// Base class for failures caused by input data (bad files, empty corpora).
/// The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input that can be located: XML byte offset, ARPA line number.
class ParseError : public DataError {
  public:
    ParseError(const std::string& what, std::size_t position)
        : DataError(what), position_(position) {}

    std::size_t position() const noexcept { return position_; }

  private:
    std::size_t position_;
};

/// Caller passed an argument outside the operation's domain.
class ArgumentError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace corpusforge
