#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgm/model.hpp"

namespace cgm {

// 1-based, inclusive start, exclusive end column.
struct SourceSpan {
  std::string file;
  int start_line = 1;
  int start_col = 1;
  int end_line = 1;
  int end_col = 1;
};

enum class Severity { Error, Warning };

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;  // syntax errors only
};

std::string format(const ParseDiagnostic& diagnostic);

struct ParseResult {
  std::optional<CgmModel> model;  // set iff no error diagnostics
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
  bool has_errors() const;
};

ParseResult parse_dsl(std::string_view text, const std::string& file = "<input>");

// Parses a standalone formula (the `constraint` syntax).
std::optional<Formula> parse_formula(std::string_view text, std::string* error = nullptr);

std::string to_dsl(const CgmModel& model);

// Words that cannot be used as identifiers.
bool is_reserved_word(std::string_view word);
bool is_identifier(std::string_view word);

}  // namespace cgm
