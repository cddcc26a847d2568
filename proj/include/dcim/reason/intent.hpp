#pragma once

#include <stdexcept>
#include <string>

#include "dcim/graph/pattern.hpp"

namespace dcim::reason {

/// Rejection of an utterance, pointing at the first unparseable token.
class IntentError : public std::runtime_error {
 public:
  IntentError(std::size_t position, const std::string& token, const std::string& expected)
      : std::runtime_error("cannot parse token '" + token + "' at offset " +
                           std::to_string(position) + " (expected " + expected + ")"),
        position_(position),
        token_(token) {}

  std::size_t position() const { return position_; }
  const std::string& token() const { return token_; }

 private:
  std::size_t position_;
  std::string token_;
};

// Controlled grammar:
//   (show|list) <entity plural>
//       [in (hall|zone) <id>]
//       (with <attr> <op> <value>)*
//       [and missing redundant power feed]
// Entity and attribute synonyms come from a fixed table; a temperature
// value suffixed with a degree unit selects temp_f or temp_c.
graph::PatternQuery compile_intent(const std::string& text);

}  // namespace dcim::reason
