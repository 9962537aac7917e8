#pragma once

#include <string>
#include <string_view>

namespace kgqagen {

// Wikidata-style identifiers: entities are Q-ids, properties are P-ids.
bool is_qid(std::string_view s);
bool is_pid(std::string_view s);

// Numeric-aware ordering for ids of the same kind ("Q9" < "Q12").
// Falls back to lexicographic comparison for anything else.
bool id_less(std::string_view a, std::string_view b);

// Extracts a trailing parenthesized id from strings like
// "Johann Martin Schleyer (Q12712)". Returns empty when absent.
// The remainder (trimmed) is written to `rest` when non-null.
std::string strip_trailing_id(std::string_view text, char kind, std::string* rest = nullptr);

// Whitespace helpers shared by answer normalization and parsing.
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::string to_lower(std::string_view s);

}  // namespace kgqagen
