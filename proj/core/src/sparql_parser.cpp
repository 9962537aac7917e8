#include "kgqagen/sparql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_set>

#include "kgqagen/ids.hpp"

namespace kgqagen::sparql {

namespace {

enum class Tok {
  End,
  Word,     // bare keyword-ish word (SELECT, OPTIONAL, a, ...)
  VarTok,   // ?name
  PName,    // prefix:local
  Iri,      // <...>
  Str,      // "..."
  Number,
  Dot,
  LBrace,
  RBrace,
  PathOp,   // / | ^ and ^^ — property-path / datatype operators
  Star,
  Other,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;    // raw or decoded text depending on kind
  std::string prefix;  // PName only
  std::string local;   // PName only
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, offset, line, col);
  }

  [[noreturn]] void fail_at(const std::string& msg, const Token& t) const {
    fail(msg, t.offset);
  }

 private:
  void advance() {
    skip_space();
    current_ = Token{};
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::End;
      current_.text = "<end of query>";
      return;
    }
    const char c = text_[pos_];
    if (c == '?' || c == '$') {
      ++pos_;
      std::string name = read_name();
      if (name.empty()) fail("expected variable name after '?'", current_.offset);
      current_.kind = Tok::VarTok;
      current_.text = name;
      return;
    }
    if (c == '<') {
      const auto close = text_.find('>', pos_);
      if (close == std::string::npos) fail("unterminated IRI", current_.offset);
      current_.kind = Tok::Iri;
      current_.text = text_.substr(pos_ + 1, close - pos_ - 1);
      pos_ = close + 1;
      return;
    }
    if (c == '"' || c == '\'') {
      current_.kind = Tok::Str;
      current_.text = read_quoted(c);
      return;
    }
    if (c == '{') { ++pos_; current_.kind = Tok::LBrace; current_.text = "{"; return; }
    if (c == '}') { ++pos_; current_.kind = Tok::RBrace; current_.text = "}"; return; }
    if (c == '.') { ++pos_; current_.kind = Tok::Dot; current_.text = "."; return; }
    if (c == '*') { ++pos_; current_.kind = Tok::Star; current_.text = "*"; return; }
    if (c == '/' || c == '|' || c == '^' || c == '+') {
      std::size_t n = (c == '^' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '^') ? 2 : 1;
      current_.kind = Tok::PathOp;
      current_.text = text_.substr(pos_, n);
      pos_ += n;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      current_.kind = Tok::Number;
      current_.text = text_.substr(pos_, end - pos_);
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word = read_name();
      if (pos_ < text_.size() && text_[pos_] == ':') {
        ++pos_;
        current_.kind = Tok::PName;
        current_.prefix = word;
        current_.local = read_name();
        current_.text = word + ":" + current_.local;
        return;
      }
      current_.kind = Tok::Word;
      current_.text = word;
      return;
    }
    current_.kind = Tok::Other;
    current_.text = std::string(1, c);
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {  // comment to end of line
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string read_name() {
    std::size_t end = pos_;
    while (end < text_.size()) {
      const char c = text_[end];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
        ++end;
      } else {
        break;
      }
    }
    std::string out = text_.substr(pos_, end - pos_);
    pos_ = end;
    return out;
  }

  std::string read_quoted(char quote) {
    std::size_t i = pos_ + 1;
    std::string out;
    while (i < text_.size() && text_[i] != quote) {
      if (text_[i] == '\\' && i + 1 < text_.size()) {
        const char esc = text_[i + 1];
        switch (esc) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '\\': out.push_back('\\'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          default: out.push_back(esc); break;
        }
        i += 2;
      } else {
        out.push_back(text_[i]);
        ++i;
      }
    }
    if (i >= text_.size()) fail("unterminated string literal", pos_);
    pos_ = i + 1;
    return out;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  Token current_;
};

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

const std::unordered_set<std::string> kForbidden = {
    "OPTIONAL", "FILTER", "UNION",  "BIND",     "VALUES", "MINUS",  "GRAPH",
    "ASK",      "CONSTRUCT", "DESCRIBE", "ORDER", "GROUP",  "HAVING", "OFFSET",
    "EXISTS",   "NOT",       "INSERT",   "DELETE"};

const std::unordered_set<std::string> kKnownPrefixes = {"wd", "wdt", "rdfs", "bd", "wikibase"};

bool is_word(const Token& t, const char* kw) {
  return t.kind == Tok::Word && upper(t.text) == kw;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  Query run() {
    parse_prefixes();
    parse_select();
    parse_where();
    parse_limit();
    if (lex_.peek().kind != Tok::End)
      lex_.fail_at("unexpected trailing content '" + lex_.peek().text + "'", lex_.peek());
    validate();
    return std::move(query_);
  }

 private:
  void parse_prefixes() {
    while (is_word(lex_.peek(), "PREFIX")) {
      lex_.next();
      Token name = lex_.next();
      if (name.kind != Tok::PName || !name.local.empty())
        lex_.fail_at("expected prefix declaration like 'wd:'", name);
      if (!kKnownPrefixes.count(name.prefix))
        lex_.fail_at("unsupported prefix '" + name.prefix + ":'", name);
      Token iri = lex_.next();
      if (iri.kind != Tok::Iri) lex_.fail_at("expected <IRI> in PREFIX declaration", iri);
    }
  }

  void parse_select() {
    Token t = lex_.next();
    if (!is_word(t, "SELECT")) {
      if (t.kind == Tok::Word && kForbidden.count(upper(t.text)))
        lex_.fail_at("unsupported construct " + upper(t.text), t);
      lex_.fail_at("expected SELECT", t);
    }
    if (is_word(lex_.peek(), "DISTINCT")) {
      lex_.next();
      query_.distinct = true;
    }
    if (lex_.peek().kind == Tok::Star)
      lex_.fail_at("unsupported projection '*'", lex_.peek());
    std::set<std::string> seen;
    while (lex_.peek().kind == Tok::VarTok) {
      Token v = lex_.next();
      if (!seen.insert(v.text).second)
        lex_.fail_at("duplicate projected variable ?" + v.text, v);
      query_.projected.push_back(v.text);
    }
    if (query_.projected.empty())
      lex_.fail_at("SELECT requires at least one variable", lex_.peek());
  }

  void parse_where() {
    Token w = lex_.next();
    if (!is_word(w, "WHERE")) lex_.fail_at("expected WHERE", w);
    Token open = lex_.next();
    if (open.kind != Tok::LBrace) lex_.fail_at("expected '{'", open);

    bool saw_service = false;
    while (true) {
      const Token& t = lex_.peek();
      if (t.kind == Tok::RBrace) {
        lex_.next();
        break;
      }
      if (t.kind == Tok::End) lex_.fail_at("unterminated pattern block", t);
      if (saw_service)
        lex_.fail_at("SERVICE wikibase:label must be the last clause", t);
      if (is_word(t, "SERVICE")) {
        parse_service();
        saw_service = true;
        if (lex_.peek().kind == Tok::Dot) lex_.next();
        continue;
      }
      if (t.kind == Tok::Word && kForbidden.count(upper(t.text)))
        lex_.fail_at("unsupported construct " + upper(t.text), t);
      if (is_word(t, "SELECT")) lex_.fail_at("unsupported construct subquery", t);
      if (t.kind == Tok::LBrace) lex_.fail_at("unsupported construct group pattern", t);
      parse_pattern();
      // separator: '.' required between patterns, optional before '}'/SERVICE
      if (lex_.peek().kind == Tok::Dot) {
        lex_.next();
      } else if (lex_.peek().kind != Tok::RBrace && !is_word(lex_.peek(), "SERVICE")) {
        lex_.fail_at("expected '.' between triple patterns", lex_.peek());
      }
    }
    if (query_.patterns.empty() && !saw_service)
      lex_.fail_at("empty pattern block", open);
    if (query_.patterns.empty())
      lex_.fail_at("pattern block contains no triple patterns", open);
  }

  void parse_service() {
    Token kw = lex_.next();  // SERVICE
    Token head = lex_.next();
    if (head.kind != Tok::PName || head.prefix != "wikibase" || head.local != "label")
      lex_.fail_at("unsupported SERVICE clause (only wikibase:label)", kw);
    Token open = lex_.next();
    if (open.kind != Tok::LBrace) lex_.fail_at("expected '{' after SERVICE wikibase:label", open);
    std::size_t depth = 1;
    while (depth > 0) {
      Token t = lex_.next();
      if (t.kind == Tok::End) lex_.fail_at("unterminated SERVICE clause", t);
      if (t.kind == Tok::LBrace) ++depth;
      if (t.kind == Tok::RBrace) --depth;
    }
    query_.label_service = true;
  }

  void parse_pattern() {
    TriplePattern tp;
    tp.s = parse_term(Role::Subject);
    tp.p = parse_term(Role::Predicate);
    if (lex_.peek().kind == Tok::PathOp)
      lex_.fail_at("unsupported property path", lex_.peek());
    tp.o = parse_term(Role::Object);
    if (lex_.peek().kind == Tok::PathOp && lex_.peek().text == "^^")
      lex_.fail_at("unsupported typed literal", lex_.peek());
    query_.patterns.push_back(std::move(tp));
  }

  enum class Role { Subject, Predicate, Object };

  PatternTerm parse_term(Role role) {
    Token t = lex_.next();
    switch (t.kind) {
      case Tok::VarTok:
        return Var{t.text};
      case Tok::PName:
        if (t.prefix == "wd") {
          if (!is_qid(t.local)) lex_.fail_at("expected wd:Q<digits>, got " + t.text, t);
          if (role == Role::Predicate)
            lex_.fail_at("entity IRI in predicate position", t);
          return EntityIri{t.local};
        }
        if (t.prefix == "wdt") {
          if (!is_pid(t.local)) lex_.fail_at("expected wdt:P<digits>, got " + t.text, t);
          if (role != Role::Predicate)
            lex_.fail_at("predicate IRI outside predicate position", t);
          return PredicateIri{t.local};
        }
        lex_.fail_at("unsupported term " + t.text, t);
      case Tok::Str:
        if (role == Role::Subject) lex_.fail_at("literal in subject position", t);
        if (role == Role::Predicate) lex_.fail_at("literal in predicate position", t);
        return Lit{t.text};
      case Tok::Word:
        if (kForbidden.count(upper(t.text)))
          lex_.fail_at("unsupported construct " + upper(t.text), t);
        if (t.text == "a") lex_.fail_at("unsupported 'a' (rdf:type) shorthand", t);
        lex_.fail_at("unexpected token '" + t.text + "' in triple pattern", t);
      default:
        lex_.fail_at("expected variable, wd:/wdt: IRI, or quoted literal, got '" + t.text + "'",
                     t);
    }
  }

  void parse_limit() {
    if (!is_word(lex_.peek(), "LIMIT")) return;
    lex_.next();
    Token n = lex_.next();
    if (n.kind != Tok::Number) lex_.fail_at("expected number after LIMIT", n);
    query_.limit = std::stoull(n.text);
  }

  void validate() {
    std::set<std::string> in_patterns;
    for (const auto& p : query_.patterns)
      for (const auto* term : {&p.s, &p.p, &p.o})
        if (const auto* v = std::get_if<Var>(term)) in_patterns.insert(v->name);
    for (const auto& v : query_.projected)
      if (!in_patterns.count(v))
        lex_.fail_at("projected variable ?" + v + " does not occur in any pattern", lex_.peek());
  }

  Lexer lex_;
  Query query_;
};

}  // namespace

Query parse(const std::string& text) { return Parser(text).run(); }

std::string to_string(const PatternTerm& t) {
  if (const auto* v = std::get_if<Var>(&t)) return "?" + v->name;
  if (const auto* e = std::get_if<EntityIri>(&t)) return "wd:" + e->qid;
  if (const auto* p = std::get_if<PredicateIri>(&t)) return "wdt:" + p->pid;
  const auto& l = std::get<Lit>(t);
  std::string out = "\"";
  for (char c : l.value) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string serialize(const Query& q) {
  std::ostringstream os;
  os << "SELECT ";
  if (q.distinct) os << "DISTINCT ";
  for (const auto& v : q.projected) os << "?" << v << " ";
  os << "WHERE { ";
  for (const auto& p : q.patterns)
    os << to_string(p.s) << " " << to_string(p.p) << " " << to_string(p.o) << " . ";
  if (q.label_service)
    os << "SERVICE wikibase:label { bd:serviceParam wikibase:language \"en\". } ";
  os << "}";
  if (q.limit) os << " LIMIT " << *q.limit;
  return os.str();
}

}  // namespace kgqagen::sparql
