#pragma once

#include <stdexcept>
#include <string>

namespace nilsoliton {

enum class Errc {
  invalid_input,
  parse_error,
  singular_map,
  precondition,
  no_solution,
  irrational_eigenvalues,
  mcc_undefined,
  non_convergence,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::invalid_input: return "invalid-input";
    case Errc::parse_error: return "parse-error";
    case Errc::singular_map: return "singular-map";
    case Errc::precondition: return "precondition";
    case Errc::no_solution: return "no-solution";
    case Errc::irrational_eigenvalues: return "irrational-eigenvalues";
    case Errc::mcc_undefined: return "mcc-undefined-by-this-route";
    case Errc::non_convergence: return "non-convergence";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), message_(what) {}
  Errc code() const noexcept { return code_; }
  // text without the code prefix
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  std::string message_;
};

// Parse failures carry a 1-based position.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg)
      : Error(Errc::parse_error,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line), column_(column), detail_(msg) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  // text without code or position
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_, column_;
  std::string detail_;
};

}  // namespace nilsoliton
