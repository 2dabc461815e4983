#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>

namespace cgm {

// Exact rational number. All model weights, bounds and numeric values use it.
using Rational = mpq_class;

// Parses "p", "p/q", "-p/q" and finite decimals such as "3.5".
// On failure returns nullopt and writes a short reason ("zero denominator",
// "malformed rational") to *error when given.
std::optional<Rational> parse_rational(std::string_view text, std::string* error = nullptr);

// Canonical reduced form: "80", "-7/2".
std::string to_string(const Rational& value);

}  // namespace cgm
