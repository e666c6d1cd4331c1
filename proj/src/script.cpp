/*
 * Copyright (c) 2026, The crosswalk authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "crosswalk/script.hpp"

#include <charconv>

#include "crosswalk/error.hpp"
#include "crosswalk/unicode.hpp"

namespace crosswalk {

namespace {

constexpr std::array<ActionName, kActionCount> kActions = {
    ActionName::CALCULATE,     ActionName::CATEGORISE,       ActionName::COLLATE,      ActionName::DEBLANK,
    ActionName::DEDUPE,        ActionName::DELETE_ROWS,      ActionName::NEW,          ActionName::PIVOT_CATEGORIES,
    ActionName::PIVOT_LONGER,  ActionName::RENAME,           ActionName::SELECT,       ActionName::SELECT_NEWEST,
    ActionName::SELECT_OLDEST, ActionName::SEPARATE,         ActionName::UNITE,
};

constexpr std::array<ActionInfo, kActionCount> kCatalog = {{
    {ActionName::CALCULATE, "field", false, "none", "signed_fields", false,
     "Sum of + fields minus - fields, per row.", "CALCULATE > 'total' < [+'a', -'b']"},
    {ActionName::CATEGORISE, "field", true, "field", "match_terms", false,
     "Assign the destination term where the source field matches any listed value (True: any value, False: none).",
     "CATEGORISE > 'state' :: 'Vacant' < 'EmptyFrom' :: [True]"},
    {ActionName::COLLATE, "field", false, "none", "fields_or_placeholders", false,
     "Per row, a list with one element per item; ~ contributes an empty element.",
     "COLLATE > 'amounts' < [~, 'Mandatory']"},
    {ActionName::DEBLANK, "none", false, "none", "none", true,
     "Drop columns and rows that are entirely empty or whitespace.", "DEBLANK"},
    {ActionName::DEDUPE, "none", false, "none", "none", true, "Drop rows identical to an earlier row.", "DEDUPE"},
    {ActionName::DELETE_ROWS, "none", false, "none", "rows", true, "Drop rows by ingest row label.",
     "DELETE_ROWS < [0, 2]"},
    {ActionName::NEW, "field", false, "none", "literal", false, "Fill the destination field with one literal.",
     "NEW > 'code' < ['E07000223']"},
    {ActionName::PIVOT_CATEGORIES, "field", false, "field", "rows", true,
     "Rows at the listed labels are headers; following rows take the header text; header rows are dropped.",
     "PIVOT_CATEGORIES > 'group' < 'label' :: [0, 4]"},
    {ActionName::PIVOT_LONGER, "field_pair", false, "none", "fields", true,
     "Reshape the listed columns wide to long into a name field and a value field.",
     "PIVOT_LONGER > ['year', 'value'] < ['2019', '2020']"},
    {ActionName::RENAME, "field", false, "none", "field", false, "Copy one source field.",
     "RENAME > 'ref' < ['PropertyID']"},
    {ActionName::SELECT, "field", false, "none", "fields", false,
     "First non-empty value among the listed fields, in order.", "SELECT > 'date' < ['EmptyFrom']"},
    {ActionName::SELECT_NEWEST, "field", false, "none", "dated_fields", false,
     "Value whose paired date is the latest.", "SELECT_NEWEST > 'v' < ['v1' + 'd1', 'v2' + 'd2']"},
    {ActionName::SELECT_OLDEST, "field", false, "none", "dated_fields", false,
     "Value whose paired date is the earliest.", "SELECT_OLDEST > 'v' < ['v1' + 'd1', 'v2' + 'd2']"},
    {ActionName::SEPARATE, "field_list", false, "separator", "field", false,
     "Split one source field on the separator; overflow stays in the last field.",
     "SEPARATE > ['first', 'rest'] < ';' :: ['names']"},
    {ActionName::UNITE, "field", false, "separator", "fields", false,
     "Join the non-empty values of the listed fields with the separator.",
     "UNITE > 'name' < ' ; ' :: ['a', 'b']"},
}};

// --- lexer -------------------------------------------------------------------

enum class Tok { ident, quoted, integer, gt, lt, dcolon, lbracket, rbracket, comma, tilde, plus, minus, end };

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::quoted: return "quoted string";
    case Tok::integer: return "integer";
    case Tok::gt: return "'>'";
    case Tok::lt: return "'<'";
    case Tok::dcolon: return "'::'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::tilde: return "'~'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::end: return "end of script";
  }
  return "token";
}

struct Token {
  Tok kind = Tok::end;
  std::string text;  // identifier, unescaped quoted content or digits
  std::size_t offset = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_ident_start(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (true) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t start = i;
    const char c = text[i];
    Token t;
    t.offset = start;
    if (c == '\'') {
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\'') {
          if (i + 1 < text.size() && text[i + 1] == '\'') {
            t.text += '\'';
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        t.text += text[i++];
      }
      if (!closed) throw ScriptSyntaxError("unterminated quoted string", start, {"'"});
      t.kind = Tok::quoted;
    } else if (is_ident_start(c)) {
      while (i < text.size() && (is_ident_start(text[i]) || is_digit(text[i]))) ++i;
      t.kind = Tok::ident;
      t.text = std::string(text.substr(start, i - start));
    } else if (is_digit(c)) {
      while (i < text.size() && is_digit(text[i])) ++i;
      if (i < text.size() && is_ident_start(text[i])) {
        throw ScriptSyntaxError("malformed integer", start, {"integer"});
      }
      t.kind = Tok::integer;
      t.text = std::string(text.substr(start, i - start));
    } else if (c == ':') {
      if (i + 1 >= text.size() || text[i + 1] != ':') throw ScriptSyntaxError("expected '::'", start, {"'::'"});
      i += 2;
      t.kind = Tok::dcolon;
    } else {
      ++i;
      switch (c) {
        case '>': t.kind = Tok::gt; break;
        case '<': t.kind = Tok::lt; break;
        case '[': t.kind = Tok::lbracket; break;
        case ']': t.kind = Tok::rbracket; break;
        case ',': t.kind = Tok::comma; break;
        case '~': t.kind = Tok::tilde; break;
        case '+': t.kind = Tok::plus; break;
        case '-': t.kind = Tok::minus; break;
        default: {
          std::string shown(1, c);
          if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
            shown = buf;
          }
          throw ScriptSyntaxError("unexpected character '" + shown + "'", start);
        }
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::end;
  end.offset = text.size();
  out.push_back(end);
  return out;
}

// --- parser ------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParsedAction parse() {
    ParsedAction a;
    const Token& head = peek();
    if (head.kind != Tok::ident) fail(head, {"action name"});
    const auto name = parse_action_name(head.text);
    if (!name) throw UnknownActionError(head.text, head.offset);
    a.action = *name;
    ++pos_;
    literal_items_ = a.action == ActionName::NEW || a.action == ActionName::CATEGORISE;

    if (peek().kind == Tok::gt) {
      ++pos_;
      parse_dest(a);
    }
    if (peek().kind == Tok::lt) {
      ++pos_;
      parse_source(a);
    }
    if (peek().kind != Tok::end) {
      std::vector<std::string> expected;
      if (a.dest_fields.empty() && !a.source_bracketed && a.source_items.empty()) expected.push_back("'>'");
      if (a.source_items.empty()) expected.push_back("'<'");
      expected.push_back("end of script");
      fail(peek(), expected);
    }
    return a;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }

  [[noreturn]] void fail(const Token& at, std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found ";
    msg += at.kind == Tok::end ? std::string("end of script") : std::string(describe(at.kind));
    if (at.kind == Tok::ident) msg += " '" + at.text + "'";
    throw ScriptSyntaxError(msg, at.offset, std::move(expected));
  }

  const Token& expect(Tok kind) {
    if (peek().kind != kind) fail(peek(), {std::string(describe(kind))});
    return toks_[pos_++];
  }

  void parse_dest(ParsedAction& a) {
    if (peek().kind == Tok::lbracket) {
      ++pos_;
      a.dest_bracketed = true;
      a.dest_fields.push_back(expect(Tok::quoted).text);
      while (peek().kind == Tok::comma) {
        ++pos_;
        a.dest_fields.push_back(expect(Tok::quoted).text);
      }
      if (peek().kind != Tok::rbracket) fail(peek(), {"','", "']'"});
      ++pos_;
      return;
    }
    if (peek().kind != Tok::quoted) fail(peek(), {"quoted string", "'['"});
    a.dest_fields.push_back(toks_[pos_++].text);
    if (peek().kind == Tok::dcolon) {
      ++pos_;
      const Token& t = peek();
      if (t.kind == Tok::quoted) {
        a.dest_term = DestTerm{t.text};
      } else if (t.kind == Tok::ident && (t.text == "True" || t.text == "False")) {
        a.dest_term = DestTerm{t.text == "True"};
      } else {
        fail(t, {"quoted string", "True", "False"});
      }
      ++pos_;
    }
  }

  void parse_source(ParsedAction& a) {
    if (peek().kind == Tok::quoted && peek(1).kind == Tok::dcolon) {
      a.source_term = toks_[pos_].text;
      pos_ += 2;
    }
    if (peek().kind == Tok::lbracket) {
      ++pos_;
      a.source_bracketed = true;
      a.source_items.push_back(parse_item());
      while (peek().kind == Tok::comma) {
        ++pos_;
        a.source_items.push_back(parse_item());
      }
      if (peek().kind != Tok::rbracket) fail(peek(), {"','", "']'"});
      ++pos_;
      return;
    }
    if (peek().kind != Tok::quoted) fail(peek(), {"quoted string", "'['"});
    a.source_items.push_back(quoted_item(toks_[pos_++].text));
  }

  SourceItem quoted_item(std::string text) const {
    if (literal_items_) return Literal{std::move(text)};
    return FieldRef{std::move(text)};
  }

  SourceItem parse_item() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::quoted: {
        std::string first = toks_[pos_++].text;
        if (peek().kind == Tok::plus) {
          ++pos_;
          return DatedField{std::move(first), expect(Tok::quoted).text};
        }
        return quoted_item(std::move(first));
      }
      case Tok::ident:
        if (t.text == "True" || t.text == "False") {
          ++pos_;
          return BooleanLiteral{t.text == "True"};
        }
        break;
      case Tok::integer: {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) throw ScriptSyntaxError("integer out of range", t.offset, {"integer"});
        ++pos_;
        return IntegerLiteral{v};
      }
      case Tok::tilde: ++pos_; return Placeholder{};
      case Tok::plus:
      case Tok::minus: {
        const Sign sign = t.kind == Tok::plus ? Sign::plus : Sign::minus;
        ++pos_;
        return SignedField{sign, expect(Tok::quoted).text};
      }
      default: break;
    }
    fail(t, {"quoted string", "True", "False", "integer", "'~'", "'+'", "'-'"});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  bool literal_items_ = false;
};

std::string render_item(const SourceItem& item) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FieldRef>) {
          return quote(v.name);
        } else if constexpr (std::is_same_v<T, Literal>) {
          return quote(v.text);
        } else if constexpr (std::is_same_v<T, BooleanLiteral>) {
          return v.value ? "True" : "False";
        } else if constexpr (std::is_same_v<T, IntegerLiteral>) {
          return std::to_string(v.value);
        } else if constexpr (std::is_same_v<T, Placeholder>) {
          return "~";
        } else if constexpr (std::is_same_v<T, SignedField>) {
          return (v.sign == Sign::plus ? "+" : "-") + quote(v.name);
        } else {
          return quote(v.value_field) + " + " + quote(v.date_field);
        }
      },
      item);
}

template <typename... Ts>
bool all_items_are(const std::vector<SourceItem>& items) {
  for (const auto& i : items) {
    if (!(std::holds_alternative<Ts>(i) || ...)) return false;
  }
  return true;
}

}  // namespace

const std::array<ActionName, kActionCount>& all_actions() noexcept { return kActions; }

std::string_view to_string(ActionName action) noexcept {
  switch (action) {
    case ActionName::CALCULATE: return "CALCULATE";
    case ActionName::CATEGORISE: return "CATEGORISE";
    case ActionName::COLLATE: return "COLLATE";
    case ActionName::DEBLANK: return "DEBLANK";
    case ActionName::DEDUPE: return "DEDUPE";
    case ActionName::DELETE_ROWS: return "DELETE_ROWS";
    case ActionName::NEW: return "NEW";
    case ActionName::PIVOT_CATEGORIES: return "PIVOT_CATEGORIES";
    case ActionName::PIVOT_LONGER: return "PIVOT_LONGER";
    case ActionName::RENAME: return "RENAME";
    case ActionName::SELECT: return "SELECT";
    case ActionName::SELECT_NEWEST: return "SELECT_NEWEST";
    case ActionName::SELECT_OLDEST: return "SELECT_OLDEST";
    case ActionName::SEPARATE: return "SEPARATE";
    case ActionName::UNITE: return "UNITE";
  }
  return "DEBLANK";
}

std::optional<ActionName> parse_action_name(std::string_view text) noexcept {
  for (const auto a : kActions) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

bool is_barrier(ActionName action) noexcept { return action_info(action).barrier; }

const std::array<ActionInfo, kActionCount>& action_catalog() noexcept { return kCatalog; }

const ActionInfo& action_info(ActionName action) noexcept { return kCatalog[static_cast<std::size_t>(action)]; }

bool ParsedAction::structurally_equal(const ParsedAction& o) const {
  return action == o.action && dest_fields == o.dest_fields && dest_bracketed == o.dest_bracketed &&
         dest_term == o.dest_term && source_term == o.source_term && source_items == o.source_items &&
         source_bracketed == o.source_bracketed;
}

ParsedAction parse_script(std::string_view text) {
  ParsedAction a = Parser(lex(text)).parse();
  a.raw = std::string(text);
  return a;
}

std::string quote(std::string_view text) {
  std::string out = "'";
  for (const char c : text) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

std::string serialize(const ParsedAction& a) {
  std::string out(to_string(a.action));
  if (!a.dest_fields.empty()) {
    out += " > ";
    if (a.dest_bracketed) {
      out += "[";
      for (std::size_t i = 0; i < a.dest_fields.size(); ++i) {
        if (i) out += ", ";
        out += quote(a.dest_fields[i]);
      }
      out += "]";
    } else {
      out += quote(a.dest_fields.front());
    }
    if (a.dest_term) {
      out += " :: ";
      if (const auto* b = std::get_if<bool>(&*a.dest_term)) {
        out += *b ? "True" : "False";
      } else {
        out += quote(std::get<std::string>(*a.dest_term));
      }
    }
  }
  if (a.source_term || !a.source_items.empty()) {
    out += " < ";
    if (a.source_term) out += quote(*a.source_term) + " :: ";
    if (a.source_bracketed || a.source_items.size() != 1) {
      out += "[";
      for (std::size_t i = 0; i < a.source_items.size(); ++i) {
        if (i) out += ", ";
        out += render_item(a.source_items[i]);
      }
      out += "]";
    } else {
      out += render_item(a.source_items.front());
    }
  }
  return out;
}

std::vector<StructureViolation> validate_structure(const ParsedAction& a) {
  std::vector<StructureViolation> out;
  const ActionInfo& info = action_info(a.action);
  const std::string name(to_string(a.action));
  auto add = [&](std::string clause, std::string message) {
    out.push_back({std::move(clause), name + ": " + std::move(message)});
  };

  // destination fields
  if (info.dest == "none") {
    if (!a.dest_fields.empty()) add("dest", "takes no destination field");
  } else if (info.dest == "field") {
    if (a.dest_fields.size() != 1 || a.dest_bracketed) add("dest", "needs exactly one unbracketed destination field");
  } else if (info.dest == "field_pair") {
    if (a.dest_fields.size() != 2 || !a.dest_bracketed) add("dest", "needs exactly two bracketed destination fields");
  } else if (info.dest == "field_list") {
    if (a.dest_fields.empty() || !a.dest_bracketed) add("dest", "needs one or more bracketed destination fields");
  }
  for (const auto& f : a.dest_fields) {
    if (f.empty()) add("dest", "destination field names must not be empty");
  }

  if (info.dest_term) {
    if (!a.dest_term) add("dest_term", "needs a destination term");
  } else if (a.dest_term) {
    add("dest_term", "takes no destination term");
  }

  if (info.source_term == "none") {
    if (a.source_term) add("source_term", "takes no source term");
  } else if (!a.source_term) {
    add("source_term", info.source_term == "separator" ? "needs a separator term" : "needs a source field term");
  } else if (a.source_term->empty()) {
    add("source_term", "source term must not be empty");
  }

  const auto& items = a.source_items;
  const std::string_view kind = info.source_items;
  if (kind == "none") {
    if (!items.empty()) add("source_items", "takes no source items");
    return out;
  }
  if (!a.source_bracketed) add("source_items", "source items must be in square brackets");
  if (items.empty()) {
    add("source_items", "needs at least one source item");
    return out;
  }
  if (kind == "field") {
    if (items.size() != 1 || !all_items_are<FieldRef>(items)) add("source_items", "needs exactly one source field");
  } else if (kind == "fields") {
    if (!all_items_are<FieldRef>(items)) add("source_items", "source items must be field names");
  } else if (kind == "literal") {
    if (items.size() != 1 || !all_items_are<Literal, BooleanLiteral, IntegerLiteral>(items)) {
      add("source_items", "needs exactly one literal value");
    }
  } else if (kind == "match_terms") {
    if (!all_items_are<Literal, BooleanLiteral>(items)) add("source_items", "match terms must be quoted values or True/False");
  } else if (kind == "signed_fields") {
    if (!all_items_are<SignedField>(items)) add("source_items", "every field needs a + or - modifier");
  } else if (kind == "fields_or_placeholders") {
    if (!all_items_are<FieldRef, Placeholder>(items)) add("source_items", "items must be field names or ~");
  } else if (kind == "dated_fields") {
    if (!all_items_are<DatedField>(items)) add("source_items", "items must be 'value' + 'date' field pairs");
  } else if (kind == "rows") {
    if (!all_items_are<IntegerLiteral>(items)) add("source_items", "items must be row labels");
  }
  for (const auto& item : items) {
    if (const auto* f = std::get_if<FieldRef>(&item); f && f->name.empty()) {
      add("source_items", "source field names must not be empty");
    }
  }
  return out;
}

std::string_view to_string(SchemaViolationKind kind) noexcept {
  switch (kind) {
    case SchemaViolationKind::unknown_dest_field: return "unknown_dest_field";
    case SchemaViolationKind::unknown_source_field: return "unknown_source_field";
    case SchemaViolationKind::unknown_category_term: return "unknown_category_term";
    case SchemaViolationKind::missing_literal: return "missing_literal";
  }
  return "unknown_dest_field";
}

std::vector<std::string> source_fields_of(const ParsedAction& a) {
  std::vector<std::string> out;
  if (a.source_term &&
      (a.action == ActionName::CATEGORISE || a.action == ActionName::PIVOT_CATEGORIES)) {
    out.push_back(*a.source_term);
  }
  for (const auto& item : a.source_items) {
    if (const auto* f = std::get_if<FieldRef>(&item)) {
      out.push_back(f->name);
    } else if (const auto* s = std::get_if<SignedField>(&item)) {
      out.push_back(s->name);
    } else if (const auto* d = std::get_if<DatedField>(&item)) {
      out.push_back(d->value_field);
      out.push_back(d->date_field);
    }
  }
  return out;
}

std::vector<std::string> source_fields_added_by(const ParsedAction& a) {
  if (a.action == ActionName::PIVOT_LONGER || a.action == ActionName::PIVOT_CATEGORIES) return a.dest_fields;
  return {};
}

std::vector<SchemaViolation> validate_against_schemas(const ParsedAction& a, const SchemaModel& source,
                                                      const SchemaModel& dest) {
  std::vector<SchemaViolation> out;
  // PIVOT_* name new working-source columns, not destination fields
  const bool pivot = !source_fields_added_by(a).empty();
  for (const auto& f : a.dest_fields) {
    if (!pivot && !dest.find_field(f)) {
      out.push_back({SchemaViolationKind::unknown_dest_field, f,
                     "destination field '" + f + "' is not in schema '" + dest.name + "'"});
    }
  }
  for (const auto& f : source_fields_of(a)) {
    if (!source.find_field(f)) {
      out.push_back({SchemaViolationKind::unknown_source_field, f,
                     "source field '" + f + "' is not in schema '" + source.name + "'"});
    }
  }
  if (a.action == ActionName::CATEGORISE && a.dest_term && a.dest_fields.size() == 1) {
    if (const auto* field = dest.find_field(a.dest_fields.front())) {
      const bool is_bool = std::holds_alternative<bool>(*a.dest_term);
      const std::string term = is_bool ? (std::get<bool>(*a.dest_term) ? "true" : "false")
                                       : std::get<std::string>(*a.dest_term);
      // terms are only constrained when the field declares categories
      bool known = !field->constraints.categories || (is_bool && field->type == FieldType::boolean);
      if (!known) {
        const std::string wanted = unicode::nfc(term);
        for (const auto& t : *field->constraints.categories) known = known || unicode::nfc(t.name) == wanted;
      }
      if (!known) {
        out.push_back({SchemaViolationKind::unknown_category_term, field->name,
                       "'" + term + "' is not a category term of '" + field->name + "'"});
      }
    }
  }
  if (a.action == ActionName::NEW && !a.dest_fields.empty() &&
      !std::any_of(a.source_items.begin(), a.source_items.end(), [](const SourceItem& i) {
        return std::holds_alternative<Literal>(i) || std::holds_alternative<BooleanLiteral>(i) ||
               std::holds_alternative<IntegerLiteral>(i);
      })) {
    out.push_back({SchemaViolationKind::missing_literal, a.dest_fields.front(),
                   "NEW needs a literal value for '" + a.dest_fields.front() + "'"});
  }
  return out;
}

}  // namespace crosswalk
