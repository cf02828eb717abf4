#include "cbn/netio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace cbn {

namespace {

struct Token {
  enum Kind { kWord, kPunct, kEnd } kind = kEnd;
  std::string text;
  int line = 1;
  int col = 1;
};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '+' ||
         c == '-';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, current_.line, current_.col);
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) {
      current_.kind = Token::kEnd;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (is_word_char(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_word_char(text_[pos_])) {
        ++pos_;
        ++col_;
      }
      current_.kind = Token::kWord;
      current_.text = std::string(text_.substr(start, pos_ - start));
    } else {
      current_.kind = Token::kPunct;
      current_.text = std::string(1, c);
      ++pos_;
      ++col_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

class NetworkParser {
 public:
  explicit NetworkParser(std::string_view text) : lex_(text) {}

  CausalNetwork parse() {
    expect_keyword("network");
    expect_word("network name");

    while (lex_.peek().kind != Token::kEnd) {
      Token t = lex_.take();
      if (t.kind != Token::kWord) fail(t, "expected 'variable' or 'probability'");
      if (t.text == "variable") {
        parse_variable();
      } else if (t.text == "probability") {
        parse_probability();
      } else {
        fail(t, "expected 'variable' or 'probability', got '" + t.text + "'");
      }
    }
    return finish();
  }

 private:
  struct ProbabilityBlock {
    int child = 0;
    std::vector<int> parents;
    std::map<int, CptRow> rows;  // joint parent state -> distribution
    Token where;
  };

  void parse_variable() {
    Token name = expect_word("variable name");
    if (lookup_.count(name.text)) fail(name, "duplicate variable '" + name.text + "'");
    expect_punct("{");
    Token kw = expect_word("'states'");
    if (kw.text != "states") fail(kw, "expected 'states'");
    expect_punct(":");
    Variable var{name.text, {}};
    while (true) {
      var.states.push_back(expect_word("state label").text);
      if (peek_punct(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_punct("}");
    if (var.arity() < 2) fail(name, "variable '" + name.text + "' needs at least two states");
    for (std::size_t a = 0; a < var.states.size(); ++a)
      for (std::size_t b = a + 1; b < var.states.size(); ++b)
        if (var.states[a] == var.states[b])
          fail(name, "duplicate state label '" + var.states[a] + "'");
    lookup_.emplace(var.name, static_cast<int>(variables_.size()));
    variables_.push_back(std::move(var));
    blocks_.push_back(std::nullopt);
  }

  void parse_probability() {
    ProbabilityBlock block;
    expect_punct("(");
    Token child = expect_word("variable name");
    block.where = child;
    block.child = resolve(child);
    if (blocks_[block.child].has_value())
      fail(child, "duplicate probability block for '" + child.text + "'");
    if (peek_punct("|")) {
      lex_.take();
      while (true) {
        Token p = expect_word("parent name");
        int pi = resolve(p);
        if (pi == block.child) fail(p, "variable '" + p.text + "' cannot be its own parent");
        for (int existing : block.parents)
          if (existing == pi) fail(p, "duplicate parent '" + p.text + "'");
        block.parents.push_back(pi);
        if (peek_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct("{");
    while (!peek_punct("}")) parse_row(block);
    expect_punct("}");

    int q = 1;
    for (int p : block.parents) q *= variables_[p].arity();
    if (static_cast<int>(block.rows.size()) != q) {
      for (int j = 0; j < q; ++j) {
        if (block.rows.count(j)) continue;
        fail(block.where, "missing CPT row for '" + variables_[block.child].name + "' at (" +
                              describe_joint_state(block, j) + ")");
      }
    }
    blocks_[block.child] = std::move(block);
  }

  void parse_row(ProbabilityBlock& block) {
    Token row_start = lex_.peek();
    std::vector<int> parent_values;
    if (!block.parents.empty()) {
      for (std::size_t a = 0; a < block.parents.size(); ++a) {
        Token label = expect_word("parent state label");
        const Variable& parent = variables_[block.parents[a]];
        auto k = parent.state_index(label.text);
        if (!k)
          fail(label, "'" + label.text + "' is not a state of parent '" + parent.name + "'");
        parent_values.push_back(*k);
        if (a + 1 < block.parents.size()) expect_punct(",");
      }
      expect_punct(":");
    } else if (peek_punct(":")) {
      lex_.take();
    }

    int j = 0;
    for (std::size_t a = 0; a < block.parents.size(); ++a)
      j = j * variables_[block.parents[a]].arity() + parent_values[a];
    if (block.rows.count(j))
      fail(row_start, "duplicate CPT row for '" + variables_[block.child].name + "' at (" +
                          describe_joint_state(block, j) + ")");

    CptRow row;
    double sum = 0.0;
    while (true) {
      Token v = expect_word("probability value");
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(v.text.data(), v.text.data() + v.text.size(), value);
      if (ec != std::errc() || ptr != v.text.data() + v.text.size())
        fail(v, "invalid probability value '" + v.text + "'");
      row.push_back(value);
      sum += value;
      if (peek_punct(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_punct(";");

    const int r = variables_[block.child].arity();
    if (static_cast<int>(row.size()) != r)
      fail(row_start, "expected " + std::to_string(r) + " probabilities for '" +
                          variables_[block.child].name + "', got " + std::to_string(row.size()));
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg << "row for '" << variables_[block.child].name << "' at (" <<
          describe_joint_state(block, j) << ") sums to " << sum;
      fail(row_start, msg.str());
    }
    block.rows.emplace(j, std::move(row));
  }

  std::string describe_joint_state(const ProbabilityBlock& block, int j) const {
    if (block.parents.empty()) return "-";
    std::vector<int> values(block.parents.size());
    for (std::size_t a = block.parents.size(); a-- > 0;) {
      int r = variables_[block.parents[a]].arity();
      values[a] = j % r;
      j /= r;
    }
    std::string out;
    for (std::size_t a = 0; a < block.parents.size(); ++a) {
      if (a > 0) out += ", ";
      const Variable& p = variables_[block.parents[a]];
      out += p.name + "=" + p.states[values[a]];
    }
    return out;
  }

  CausalNetwork finish() {
    std::vector<std::vector<int>> parents(variables_.size());
    std::vector<Cpt> cpts(variables_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (!blocks_[i].has_value())
        throw ParseError("missing probability block for variable '" + variables_[i].name + "'", 1,
                         1);
      ProbabilityBlock& b = *blocks_[i];
      parents[i] = b.parents;
      Cpt cpt;
      for (auto& [j, row] : b.rows) cpt.push_back(std::move(row));
      cpts[i] = std::move(cpt);
    }
    CausalNetwork net{NetworkStructure(variables_, std::move(parents)), std::move(cpts)};
    ValidationReport report = validate_network(net);
    if (!report.ok()) throw ParseError(report.errors.front(), 1, 1);
    return net;
  }

  int resolve(const Token& name) {
    auto it = lookup_.find(name.text);
    if (it == lookup_.end()) fail(name, "undeclared variable '" + name.text + "'");
    return it->second;
  }

  Token expect_word(const std::string& what) {
    Token t = lex_.take();
    if (t.kind != Token::kWord) fail(t, "expected " + what);
    return t;
  }

  void expect_keyword(const std::string& keyword) {
    Token t = lex_.take();
    if (t.kind != Token::kWord || t.text != keyword) fail(t, "expected '" + keyword + "'");
  }

  void expect_punct(const std::string& p) {
    Token t = lex_.take();
    if (t.kind != Token::kPunct || t.text != p) fail(t, "expected '" + p + "'");
  }

  bool peek_punct(const std::string& p) const {
    return lex_.peek().kind == Token::kPunct && lex_.peek().text == p;
  }

  [[noreturn]] static void fail(const Token& at, const std::string& message) {
    throw ParseError(message, at.line, at.col);
  }

  Lexer lex_;
  std::vector<Variable> variables_;
  std::vector<std::optional<ProbabilityBlock>> blocks_;
  std::unordered_map<std::string, int> lookup_;
};

std::string format_probability(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

CausalNetwork parse_network(std::string_view text) { return NetworkParser(text).parse(); }

std::string write_network(const CausalNetwork& net, std::string_view name) {
  const NetworkStructure& s = net.structure;
  std::ostringstream out;
  out << "network " << name << "\n\n";
  for (const Variable& v : s.variables()) {
    out << "variable " << v.name << " { states: ";
    for (std::size_t k = 0; k < v.states.size(); ++k) {
      if (k > 0) out << ", ";
      out << v.states[k];
    }
    out << " }\n";
  }
  for (int i = 0; i < s.num_variables(); ++i) {
    out << "\nprobability ( " << s.variable(i).name;
    const auto& parents = s.parents(i);
    if (!parents.empty()) {
      out << " | ";
      for (std::size_t a = 0; a < parents.size(); ++a) {
        if (a > 0) out << ", ";
        out << s.variable(parents[a]).name;
      }
    }
    out << " ) {\n";
    const int q = s.parent_state_count(i);
    for (int j = 0; j < q; ++j) {
      out << "  ";
      if (!parents.empty()) {
        auto values = joint_state_values(s, i, j);
        for (std::size_t a = 0; a < parents.size(); ++a) {
          if (a > 0) out << ", ";
          out << s.variable(parents[a]).states[values[a]];
        }
        out << ": ";
      }
      const CptRow& row = net.cpts[i][j];
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (k > 0) out << ", ";
        out << format_probability(row[k]);
      }
      out << ";\n";
    }
    out << "}\n";
  }
  return out.str();
}

CausalNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

void save_network(const CausalNetwork& net, const std::filesystem::path& path,
                  std::string_view name) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write network file '" + path.string() + "'");
  out << write_network(net, name);
}

}  // namespace cbn
