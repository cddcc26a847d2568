#include "dcim/reason/intent.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

namespace dcim::reason {

namespace {

using graph::AttrPredicate;
using graph::CountPredicate;
using graph::Direction;
using graph::EdgeKind;
using graph::EdgePattern;
using graph::PatternQuery;

struct Token {
  std::string text;     // original casing, quotes stripped
  std::string lower;
  std::size_t offset;   // character offset in the utterance
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) { ++i; continue; }
    std::size_t start = i;
    std::string word;
    if (text[i] == '\'' || text[i] == '"') {
      char quote = text[i++];
      while (i < text.size() && text[i] != quote) word.push_back(text[i++]);
      if (i < text.size()) ++i;
    } else {
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
        word.push_back(text[i++]);
    }
    std::string lower = word;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    tokens.push_back({std::move(word), std::move(lower), start});
  }
  return tokens;
}

// Plural entity noun -> graph label; the second member is an implied
// structural predicate ("gpu racks" = Rack with accelerator='GPU').
struct EntityEntry {
  std::string label;
  std::optional<AttrPredicate> implied;
};

const std::map<std::string, EntityEntry>& entity_table() {
  static const std::map<std::string, EntityEntry> table = {
      {"racks", {"Rack", std::nullopt}},
      {"switches", {"Switch", std::nullopt}},
      {"pdus", {"PDU", std::nullopt}},
      {"pumps", {"Pump", std::nullopt}},
      {"gpus", {"GPU", std::nullopt}},
      {"services", {"Service", std::nullopt}},
      {"loops", {"CoolantLoop", std::nullopt}},
      {"halls", {"Hall", std::nullopt}},
      {"zones", {"Zone", std::nullopt}},
  };
  return table;
}

const std::map<std::string, std::string>& attr_synonyms() {
  static const std::map<std::string, std::string> table = {
      {"temperature", "temp_c"},
      {"power", "power_kw"},
      {"utilization", "utilization_pct"},
      {"vibration", "vibration"},
  };
  return table;
}

std::optional<CmpOp> parse_op(const std::string& s) {
  if (s == ">") return CmpOp::Gt;
  if (s == "<") return CmpOp::Lt;
  if (s == ">=") return CmpOp::Ge;
  if (s == "<=") return CmpOp::Le;
  if (s == "=" || s == "==") return CmpOp::Eq;
  if (s == "!=") return CmpOp::Ne;
  return std::nullopt;
}

// A numeric token, optionally suffixed with a degree unit (80°F, 27c).
struct ParsedValue {
  Scalar value;
  std::optional<char> unit;  // 'f' or 'c'
};

std::optional<ParsedValue> parse_value(const std::string& raw) {
  std::string s = raw;
  std::optional<char> unit;
  auto strip_suffix = [&](const std::string& suffix, char u) {
    if (s.size() > suffix.size() &&
        s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
      unit = u;
      return true;
    }
    return false;
  };
  strip_suffix("°F", 'f') || strip_suffix("°f", 'f') || strip_suffix("°C", 'c') ||
      strip_suffix("°c", 'c') || strip_suffix("F", 'f') || strip_suffix("C", 'c') ||
      strip_suffix("f", 'f') || strip_suffix("c", 'c');

  if (s.empty()) return std::nullopt;
  bool numeric = true, dot = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '-' && i == 0) continue;
    if (c == '.' && !dot) { dot = true; continue; }
    if (!std::isdigit(static_cast<unsigned char>(c))) { numeric = false; break; }
  }
  if (!numeric) return ParsedValue{Scalar{raw}, std::nullopt};
  if (dot) return ParsedValue{Scalar{std::stod(s)}, unit};
  return ParsedValue{Scalar{std::int64_t(std::stoll(s))}, unit};
}

}  // namespace

PatternQuery compile_intent(const std::string& text) {
  std::vector<Token> tokens = tokenize(text);
  std::size_t pos = 0;
  auto fail = [&](const std::string& expected) -> void {
    if (pos < tokens.size()) throw IntentError(tokens[pos].offset, tokens[pos].text, expected);
    throw IntentError(text.size(), "<end of input>", expected);
  };
  auto peek = [&]() -> const std::string& {
    static const std::string empty;
    return pos < tokens.size() ? tokens[pos].lower : empty;
  };

  PatternQuery q;

  if (peek() != "show" && peek() != "list") fail("show|list");
  ++pos;

  // Entity phrase; an adjective before a known plural becomes an implied
  // attribute predicate ("gpu racks").
  std::optional<AttrPredicate> implied;
  if (pos < tokens.size() && tokens[pos].lower == "gpu" && pos + 1 < tokens.size() &&
      entity_table().count(tokens[pos + 1].lower)) {
    implied = AttrPredicate{"accelerator", CmpOp::Eq, Scalar{std::string("GPU")}};
    ++pos;
  }
  auto eit = entity_table().find(peek());
  if (eit == entity_table().end()) fail("an entity noun (racks, pumps, ...)");
  q.label = eit->second.label;
  if (eit->second.implied) q.node_preds.push_back(*eit->second.implied);
  if (implied) q.node_preds.push_back(*implied);
  ++pos;

  if (peek() == "in") {
    ++pos;
    std::string container;
    if (peek() == "hall") container = "Hall";
    else if (peek() == "zone") container = "Zone";
    else fail("hall|zone");
    ++pos;
    if (pos >= tokens.size()) fail("a hall or zone identifier");
    EdgePattern ep;
    ep.kind = EdgeKind::LocatedIn;
    ep.direction = Direction::Out;
    ep.neighbor_label = container;
    ep.neighbor_preds.push_back({"name", CmpOp::Eq, Scalar{tokens[pos].text}});
    q.edges.push_back(std::move(ep));
    ++pos;
  }

  while (peek() == "with") {
    ++pos;
    if (pos >= tokens.size()) fail("an attribute name");
    std::string attr = tokens[pos].lower;
    if (auto sit = attr_synonyms().find(attr); sit != attr_synonyms().end()) attr = sit->second;
    ++pos;
    if (pos >= tokens.size()) fail("a comparator");
    auto op = parse_op(tokens[pos].lower);
    if (!op) fail("a comparator (<, >, <=, >=, =, !=)");
    ++pos;
    if (pos >= tokens.size()) fail("a value");
    auto value = parse_value(tokens[pos].text);
    if (!value) fail("a literal value");
    if (value->unit) {
      // The degree unit picks the unit-suffixed attribute name.
      if (attr == "temp_c" || attr == "temperature")
        attr = *value->unit == 'f' ? "temp_f" : "temp_c";
    }
    q.node_preds.push_back({attr, *op, value->value});
    ++pos;
  }

  if (peek() == "and") {
    ++pos;
    for (const char* expected : {"missing", "redundant", "power", "feed"}) {
      if (peek() != expected) fail(expected);
      ++pos;
    }
    q.counts.push_back({EdgeKind::PoweredBy, Direction::Out, CmpOp::Lt, 2, true});
  }

  if (pos < tokens.size()) fail("end of query");
  return q;
}

}  // namespace dcim::reason
