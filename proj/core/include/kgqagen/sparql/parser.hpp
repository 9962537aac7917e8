#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "kgqagen/sparql/ast.hpp"

namespace kgqagen::sparql {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset, std::size_t line, std::size_t column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        offset_(offset),
        line_(line),
        column_(column) {}

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

// Parses the restricted grammar:
//
//   [PREFIX wd:/wdt:/rdfs:/bd:/wikibase: <iri>]*
//   SELECT [DISTINCT] ?v+
//   WHERE { tp . tp . ... [SERVICE wikibase:label { ... }] }
//   [LIMIT n]
//
// Triple pattern terms are variables, wd:Q… entities, wdt:P… predicates, or
// quoted literals. OPTIONAL, FILTER, UNION, BIND, VALUES, MINUS, GRAPH,
// subqueries and property paths are rejected with a positioned ParseError.
Query parse(const std::string& text);

}  // namespace kgqagen::sparql
