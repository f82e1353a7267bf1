#pragma once

#include <stdexcept>
#include <string>

namespace fogplan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// malformed input files (dataset rows, manifests)
struct ParseError : Error {
  using Error::Error;
};

// invalid configuration values; message names the offending key
struct ConfigError : Error {
  using Error::Error;
};

// a required input file does not exist
struct MissingInputError : Error {
  using Error::Error;
};

}  // namespace fogplan
