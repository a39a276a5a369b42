#include "railnet/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace railnet {

namespace {

constexpr std::size_t kLineWidth = 200;

std::string number_text(const Rational& value) {
  auto text = exact_decimal(value);
  return text ? *text : to_string(value);
}

// Writes `name: terms` with wrapping; returns nothing, appends to out.
class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}

  void start(const std::string& text) {
    out_ << text;
    width_ = text.size();
  }
  void piece(const std::string& text) {
    if (width_ + text.size() + 1 > kLineWidth) {
      out_ << "\n  ";
      width_ = 2;
    } else {
      out_ << ' ';
      ++width_;
    }
    out_ << text;
    width_ += text.size();
  }
  void end() { out_ << '\n'; }

 private:
  std::ostringstream& out_;
  std::size_t width_ = 0;
};

// Multiplier that makes every number in the list a terminating decimal.
BigInt scale_for(const std::vector<const Rational*>& numbers) {
  bool exact = std::all_of(numbers.begin(), numbers.end(),
                           [](const Rational* r) { return exact_decimal(*r).has_value(); });
  if (exact) return 1;
  BigInt l = 1;
  for (const auto* r : numbers) {
    BigInt den = boost::multiprecision::denominator(*r);
    l = l / boost::multiprecision::gcd(l, den) * den;
  }
  return l;
}

void write_terms(LineWriter& line, const ConstraintSystem& sys, const std::vector<Term>& terms, const BigInt& scale,
                 bool& first) {
  for (const auto& term : terms) {
    Rational c = term.coef * scale;
    const auto& name = sys.variables[static_cast<std::size_t>(term.var)].name;
    std::string sign = c < 0 ? "-" : "+";
    Rational mag = c < 0 ? Rational(-c) : c;
    std::string text;
    if (first) text = c < 0 ? "-" : "";
    else text = sign;
    if (mag != 1) text += (text.empty() ? "" : " ") + number_text(mag);
    text += (text.empty() ? "" : " ") + name;
    line.piece(text);
    first = false;
  }
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::Equal: return "=";
    case Sense::GreaterEqual: return ">=";
  }
  return "=";
}

}  // namespace

RowFamily family_from_row_name(std::string_view name) {
  auto starts = [&](std::string_view p) { return name.substr(0, p.size()) == p; };
  if (starts("cap_")) return RowFamily::Capacity;
  if (starts("dep_")) return RowFamily::Departure;
  if (starts("arr_")) return RowFamily::Arrival;
  if (starts("hw_")) return RowFamily::Headway;
  if (starts("flow_")) return RowFamily::Flow;
  if (starts("conn_")) return RowFamily::Connection;
  if (starts("via_")) return RowFamily::Via;
  return RowFamily::Other;
}

std::string export_lp(const ConstraintSystem& sys) {
  std::ostringstream out;
  LineWriter line(out);
  out << "\\ binary program, " << sys.variables.size() << " variables, " << sys.rows.size() << " rows\n";
  out << "Minimize\n";
  {
    std::vector<const Rational*> numbers;
    for (const auto& t : sys.objective) numbers.push_back(&t.coef);
    numbers.push_back(&sys.objective_offset);
    BigInt scale = scale_for(numbers);
    if (scale != 1) out << "\\ scale " << scale.str() << "\n";
    line.start(" obj:");
    bool first = true;
    write_terms(line, sys, sys.objective, scale, first);
    Rational offset = sys.objective_offset * scale;
    if (offset != 0 || first) {
      std::string text = offset < 0 ? "- " : (first ? "" : "+ ");
      line.piece(text + number_text(offset < 0 ? Rational(-offset) : offset));
    }
    line.end();
  }
  out << "Subject To\n";
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    const auto& row = sys.rows[r];
    std::vector<const Rational*> numbers;
    for (const auto& t : row.terms) numbers.push_back(&t.coef);
    numbers.push_back(&row.rhs);
    BigInt scale = scale_for(numbers);
    if (scale != 1) out << "\\ scale " << scale.str() << "\n";
    std::string name = row.tag.name.empty() ? "r" + std::to_string(r) : row.tag.name;
    line.start(" " + name + ":");
    bool first = true;
    write_terms(line, sys, row.terms, scale, first);
    if (first) {
      // LP grammar needs a variable on the left-hand side.
      line.piece("0 " + (sys.variables.empty() ? std::string("_zero") : sys.variables.front().name));
    }
    Rational rhs = row.rhs * scale;
    line.piece(std::string(sense_text(row.sense)) + " " + number_text(rhs));
    line.end();
  }
  out << "Binaries\n";
  if (!sys.variables.empty()) {
    line.start("");
    bool first = true;
    for (const auto& v : sys.variables) {
      if (first) {
        line.start(" " + v.name);
        first = false;
      } else {
        line.piece(v.name);
      }
    }
    line.end();
  }
  out << "End\n";
  return out.str();
}

namespace {

enum class TokKind { Name, Number, Plus, Minus, Colon, Sense, Scale };

struct Token {
  TokKind kind;
  std::string text;
  int line;
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || std::string_view("_.'!\"#$%&()/,;?@`{}|~[]").find(c) !=
                                                           std::string_view::npos;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct Sections {
  std::vector<Token> objective;
  std::vector<Token> constraints;
  std::vector<Token> binaries;
  bool has_objective = false;
};

void tokenize_line(std::string_view line, int lineno, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\\') {
      return;
    } else if (c == '+') {
      out.push_back({TokKind::Plus, "+", lineno});
      ++i;
    } else if (c == '-') {
      out.push_back({TokKind::Minus, "-", lineno});
      ++i;
    } else if (c == ':') {
      out.push_back({TokKind::Colon, ":", lineno});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::size_t j = i + 1;
      while (j < line.size() && (line[j] == '<' || line[j] == '>' || line[j] == '=')) ++j;
      std::string s(line.substr(i, j - i));
      std::string norm;
      if (s == "<=" || s == "=<" || s == "<") norm = "<=";
      else if (s == ">=" || s == "=>" || s == ">") norm = ">=";
      else if (s == "=") norm = "=";
      else throw LpParseError("line " + std::to_string(lineno) + ": bad operator '" + s + "'");
      out.push_back({TokKind::Sense, norm, lineno});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.' || line[j] == '/'))
        ++j;
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          j = k;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
      }
      out.push_back({TokKind::Number, std::string(line.substr(i, j - i)), lineno});
      i = j;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && name_char(line[j])) ++j;
      out.push_back({TokKind::Name, std::string(line.substr(i, j - i)), lineno});
      i = j;
    } else {
      throw LpParseError("line " + std::to_string(lineno) + ": unexpected character '" + std::string(1, c) + "'");
    }
  }
}

Sections split_sections(std::string_view text) {
  Sections s;
  std::vector<Token>* current = nullptr;
  bool ended = false;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size() && !ended) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    std::string trimmed(line);
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    auto key = lower(trimmed);
    if (key == "minimize" || key == "minimum" || key == "min") {
      current = &s.objective;
      s.has_objective = true;
      continue;
    }
    if (key == "subject to" || key == "such that" || key == "st" || key == "s.t.") {
      current = &s.constraints;
      continue;
    }
    if (key == "binaries" || key == "binary" || key == "bin") {
      current = &s.binaries;
      continue;
    }
    if (key == "end") {
      ended = true;
      continue;
    }
    if (key.rfind("\\ scale ", 0) == 0) {
      if (!current) throw LpParseError("line " + std::to_string(lineno) + ": scale comment outside a section");
      current->push_back({TokKind::Scale, trimmed.substr(8), lineno});
      continue;
    }
    if (trimmed.empty() || trimmed[0] == '\\') continue;
    if (!current) throw LpParseError("line " + std::to_string(lineno) + ": text before the objective section");
    tokenize_line(line, lineno, *current);
  }
  if (!ended) throw LpParseError("missing End");
  if (!s.has_objective) throw LpParseError("missing Minimize section");
  return s;
}

class RowReader {
 public:
  RowReader(const std::vector<Token>& toks, ConstraintSystem& sys) : toks_(toks), sys_(sys) {}

  bool done() const { return pos_ >= toks_.size(); }

  BigInt take_scale() {
    BigInt scale = 1;
    while (!done() && toks_[pos_].kind == TokKind::Scale) {
      scale = BigInt(toks_[pos_].text);
      ++pos_;
    }
    return scale;
  }

  std::string take_label() {
    if (pos_ + 1 < toks_.size() && toks_[pos_].kind == TokKind::Name && toks_[pos_ + 1].kind == TokKind::Colon) {
      std::string name = toks_[pos_].text;
      pos_ += 2;
      return name;
    }
    return {};
  }

  // Reads signed terms until a sense token or the end. Constants go to `constant`.
  std::vector<Term> read_terms(Rational& constant, const BigInt& scale) {
    std::vector<Term> terms;
    std::map<int, std::size_t> position;
    while (!done() && toks_[pos_].kind != TokKind::Sense) {
      if (toks_[pos_].kind == TokKind::Name && pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == TokKind::Colon) break;
      if (toks_[pos_].kind == TokKind::Scale) break;
      int sign = 1;
      while (!done() && (toks_[pos_].kind == TokKind::Plus || toks_[pos_].kind == TokKind::Minus)) {
        if (toks_[pos_].kind == TokKind::Minus) sign = -sign;
        ++pos_;
      }
      if (done()) throw error("dangling sign");
      std::optional<Rational> coef;
      if (toks_[pos_].kind == TokKind::Number) {
        coef = number(toks_[pos_]);
        ++pos_;
      }
      if (!done() && toks_[pos_].kind == TokKind::Name &&
          !(pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == TokKind::Colon)) {
        Rational c = Rational(sign) * coef.value_or(Rational(1)) / Rational(scale);
        const std::string& name = toks_[pos_].text;
        ++pos_;
        if (c == 0) continue;
        int id = variable(name);
        if (auto it = position.find(id); it != position.end()) {
          terms[it->second].coef += c;
        } else {
          position.emplace(id, terms.size());
          terms.push_back({id, c});
        }
      } else if (coef) {
        constant += Rational(sign) * *coef / Rational(scale);
      } else {
        throw error("expected a term");
      }
    }
    terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Term& t) { return t.coef == 0; }), terms.end());
    return terms;
  }

  Sense take_sense() {
    if (done() || toks_[pos_].kind != TokKind::Sense) throw error("expected <=, >= or =");
    const auto& t = toks_[pos_++].text;
    if (t == "<=") return Sense::LessEqual;
    if (t == ">=") return Sense::GreaterEqual;
    return Sense::Equal;
  }

  Rational take_rhs(const BigInt& scale) {
    int sign = 1;
    while (!done() && (toks_[pos_].kind == TokKind::Plus || toks_[pos_].kind == TokKind::Minus)) {
      if (toks_[pos_].kind == TokKind::Minus) sign = -sign;
      ++pos_;
    }
    if (done() || toks_[pos_].kind != TokKind::Number) throw error("expected a right-hand side");
    return Rational(sign) * number(toks_[pos_++]) / Rational(scale);
  }

 private:
  LpParseError error(const std::string& what) const {
    int line = done() ? (toks_.empty() ? 0 : toks_.back().line) : toks_[pos_].line;
    return LpParseError("line " + std::to_string(line) + ": " + what);
  }

  Rational number(const Token& t) const {
    try {
      return parse_rational(t.text);
    } catch (const std::invalid_argument&) {
      throw LpParseError("line " + std::to_string(t.line) + ": bad number '" + t.text + "'");
    }
  }

  int variable(const std::string& name) {
    if (auto id = sys_.find_variable(name)) return *id;
    throw error("variable " + name + " is not declared binary");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  ConstraintSystem& sys_;
};

}  // namespace

ConstraintSystem parse_lp(std::string_view text) {
  Sections sections = split_sections(text);
  ConstraintSystem sys;
  // Declared binaries fix the column order.
  for (const auto& tok : sections.binaries) {
    if (tok.kind != TokKind::Name) throw LpParseError("line " + std::to_string(tok.line) + ": expected a name");
    if (!sys.find_variable(tok.text)) {
      Variable v;
      v.name = tok.text;
      sys.add_variable(std::move(v));
    }
  }

  RowReader obj(sections.objective, sys);
  BigInt scale = obj.take_scale();
  obj.take_label();
  Rational constant = 0;
  sys.objective = obj.read_terms(constant, scale);
  sys.objective_offset = constant;
  if (!obj.done()) throw LpParseError("unexpected text in the objective");

  RowReader rows(sections.constraints, sys);
  while (!rows.done()) {
    BigInt row_scale = rows.take_scale();
    LinearRow row;
    row.tag.name = rows.take_label();
    Rational lhs_constant = 0;
    row.terms = rows.read_terms(lhs_constant, row_scale);
    row.sense = rows.take_sense();
    row.rhs = rows.take_rhs(row_scale) - lhs_constant;
    row.tag.family = family_from_row_name(row.tag.name);
    sys.rows.push_back(std::move(row));
  }
  return sys;
}

namespace {

std::string canonical_row(const ConstraintSystem& sys, const LinearRow& row) {
  std::vector<std::pair<std::string, Rational>> terms;
  for (const auto& t : row.terms) {
    if (t.coef != 0) terms.emplace_back(sys.variables[static_cast<std::size_t>(t.var)].name, t.coef);
  }
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = row.tag.name + "|" + sense_text(row.sense) + "|" + to_string(row.rhs);
  for (const auto& [name, coef] : terms) out += "|" + name + "*" + to_string(coef);
  return out;
}

std::map<std::string, Rational> objective_map(const ConstraintSystem& sys) {
  std::map<std::string, Rational> out;
  for (const auto& t : sys.objective) out[sys.variables[static_cast<std::size_t>(t.var)].name] += t.coef;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace

bool systems_equivalent(const ConstraintSystem& a, const ConstraintSystem& b) {
  if (a.variables.size() != b.variables.size()) return false;
  for (std::size_t i = 0; i < a.variables.size(); ++i) {
    if (a.variables[i].name != b.variables[i].name) return false;
  }
  if (a.objective_offset != b.objective_offset || objective_map(a) != objective_map(b)) return false;
  if (a.rows.size() != b.rows.size()) return false;
  std::vector<std::string> ra, rb;
  for (const auto& r : a.rows) ra.push_back(canonical_row(a, r));
  for (const auto& r : b.rows) rb.push_back(canonical_row(b, r));
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  return ra == rb;
}

}  // namespace railnet
