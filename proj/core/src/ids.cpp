#include "kgqagen/ids.hpp"

#include <algorithm>
#include <cctype>

namespace kgqagen {

namespace {

bool is_prefixed_id(std::string_view s, char prefix) {
  if (s.size() < 2 || s[0] != prefix) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

bool is_qid(std::string_view s) { return is_prefixed_id(s, 'Q'); }
bool is_pid(std::string_view s) { return is_prefixed_id(s, 'P'); }

bool id_less(std::string_view a, std::string_view b) {
  const bool both_ids = (is_qid(a) && is_qid(b)) || (is_pid(a) && is_pid(b));
  if (both_ids) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;  // equal length: digit-wise compare is numeric compare
  }
  return a < b;
}

std::string strip_trailing_id(std::string_view text, char kind, std::string* rest) {
  std::string trimmed = trim(text);
  std::string id;
  if (!trimmed.empty() && trimmed.back() == ')') {
    const auto open = trimmed.rfind('(');
    if (open != std::string::npos) {
      std::string_view inner(trimmed.data() + open + 1, trimmed.size() - open - 2);
      if (is_prefixed_id(inner, kind)) {
        id = std::string(inner);
        trimmed = trim(std::string_view(trimmed).substr(0, open));
      }
    }
  }
  if (rest) *rest = trimmed;
  return id;
}

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out.push_back(' ');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace kgqagen
