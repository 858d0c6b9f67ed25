#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace fddi {

// Every error carries a short machine-readable kind ("UnknownLevel",
// "InvalidSymbol", ...) so callers can switch on it and the CLI can print
// "kind: detail" as a single parsable line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& detail)
      : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

}  // namespace fddi
