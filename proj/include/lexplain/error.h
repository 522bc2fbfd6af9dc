#pragma once

#include <stdexcept>
#include <string>

namespace lexplain {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input data (corpus records, identifiers, labels).
class DataError : public Error {
 public:
  using Error::Error;
};

// Missing or malformed configuration (lexica files, parameters).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace lexplain
