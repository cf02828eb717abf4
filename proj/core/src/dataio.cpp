#include "cbn/dataio.hpp"

#include <fstream>
#include <sstream>

namespace cbn {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '+' ||
         c == '-';
}

// One source line with 1-based location tracking.
class LineScanner {
 public:
  LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string word(const std::string& what) {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected " + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  int column() {
    skip_space();
    return static_cast<int>(pos_) + 1;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, line_, static_cast<int>(pos_) + 1);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
};

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

bool blank(std::string_view line) {
  for (char c : line)
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

std::vector<Variable> parse_header(std::string_view text, int line_no) {
  LineScanner scan(text, line_no);
  std::string kw = scan.word("'vars' header");
  if (kw != "vars") scan.fail("expected 'vars' header");
  scan.expect(':');
  std::vector<Variable> variables;
  while (true) {
    Variable var;
    var.name = scan.word("variable name");
    for (const Variable& existing : variables)
      if (existing.name == var.name) scan.fail("duplicate variable name '" + var.name + "'");
    scan.expect('{');
    while (true) {
      var.states.push_back(scan.word("state label"));
      if (scan.consume(',')) continue;
      break;
    }
    scan.expect('}');
    if (var.arity() < 2) scan.fail("variable '" + var.name + "' needs at least two states");
    variables.push_back(std::move(var));
    if (scan.consume(',')) continue;
    break;
  }
  if (!scan.at_end()) scan.fail("unexpected trailing text in header");
  return variables;
}

}  // namespace

std::optional<int> Dataset::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}

int Dataset::index_of(std::string_view name) const {
  auto found = find(name);
  if (!found) throw Error("dataset has no variable '" + std::string(name) + "'");
  return *found;
}

Dataset parse_dataset(std::string_view text) {
  Dataset dataset;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    std::string_view line = strip_comment(raw);
    if (blank(line)) continue;

    if (!have_header) {
      dataset.variables = parse_header(line, line_no);
      have_header = true;
      continue;
    }

    LineScanner scan(line, line_no);
    CaseRecord record;
    for (int i = 0; i < dataset.num_variables(); ++i) {
      if (i > 0) scan.expect(',');
      bool manipulated = scan.consume('!');
      int col = scan.column();
      std::string label = scan.word("state label");
      auto k = dataset.variables[i].state_index(label);
      if (!k)
        throw ParseError("'" + label + "' is not a state of variable '" +
                             dataset.variables[i].name + "'",
                         line_no, col);
      record.values.push_back(*k);
      record.manipulated.push_back(manipulated);
    }
    if (!scan.at_end()) scan.fail("case has more values than variables");
    dataset.cases.push_back(std::move(record));
  }
  if (!have_header) throw ParseError("missing 'vars:' header", 1, 1);
  return dataset;
}

std::string write_dataset(const Dataset& dataset) {
  std::ostringstream out;
  out << "vars: ";
  for (std::size_t i = 0; i < dataset.variables.size(); ++i) {
    if (i > 0) out << ", ";
    const Variable& v = dataset.variables[i];
    out << v.name << "{";
    for (std::size_t k = 0; k < v.states.size(); ++k) {
      if (k > 0) out << ",";
      out << v.states[k];
    }
    out << "}";
  }
  out << "\n";
  for (const CaseRecord& record : dataset.cases) {
    for (std::size_t i = 0; i < record.values.size(); ++i) {
      if (i > 0) out << ",";
      if (record.manipulated[i]) out << "!";
      out << dataset.variables[i].states[record.values[i]];
    }
    out << "\n";
  }
  return out.str();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_dataset(buffer.str());
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file '" + path.string() + "'");
  out << write_dataset(dataset);
}

}  // namespace cbn
