#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "spge/problems.hpp"

namespace spge {

ParseError::ParseError(std::string field, std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + message),
      field_(std::move(field)),
      line_(line) {}

namespace {

constexpr std::string_view kMagic = "spge-instance";
constexpr int kVersion = 1;

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_row(std::ostream& os, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (i) os << ' ';
    os << format_double(v[i]);
  }
  os << '\n';
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = text.find('\n', pos);
      const std::string_view raw =
          text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      ++number;
      Line line{number, split(raw)};
      if (!line.tokens.empty() && line.tokens.front().front() != '#') {
        lines_.push_back(std::move(line));
      }
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }

  const Line& next(const std::string& field) {
    if (cursor_ >= lines_.size()) {
      const std::size_t last = lines_.empty() ? 0 : lines_.back().number;
      throw ParseError(field, last + 1, "unexpected end of file");
    }
    return lines_[cursor_++];
  }

  bool peek_keyword(std::string_view kw) const {
    return cursor_ < lines_.size() && lines_[cursor_].tokens.size() == 1 &&
           lines_[cursor_].tokens[0] == kw;
  }

  bool at_end() const { return cursor_ >= lines_.size(); }

 private:
  static std::vector<std::string_view> split(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
      std::size_t j = i;
      while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
      if (j > i) out.push_back(s.substr(i, j - i));
      i = j;
    }
    return out;
  }

  std::vector<Line> lines_;
  std::size_t cursor_ = 0;
};

double parse_double(std::string_view tok, const std::string& field, std::size_t line) {
  double value = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || std::isnan(value)) {
    throw ParseError(field, line, "invalid real number '" + std::string(tok) + "'");
  }
  return value;
}

long long parse_integer(std::string_view tok, const std::string& field, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(field, line, "invalid integer '" + std::string(tok) + "'");
  }
  return value;
}

const Line& expect_key(Reader& r, const std::string& key, std::size_t arity) {
  const Line& line = r.next(key);
  if (line.tokens[0] != key) {
    throw ParseError(key, line.number, "expected '" + key + "', found '" +
                                           std::string(line.tokens[0]) + "'");
  }
  if (line.tokens.size() != arity + 1) {
    throw ParseError(key, line.number, "expected " + std::to_string(arity) + " value(s)");
  }
  return line;
}

Vector read_values(Reader& r, const std::string& field, Index count) {
  const Line& line = r.next(field);
  if (static_cast<Index>(line.tokens.size()) != count) {
    throw ParseError(field, line.number,
                     "expected " + std::to_string(count) + " values, found " +
                         std::to_string(line.tokens.size()));
  }
  Vector v(count);
  for (Index i = 0; i < count; ++i) {
    v[i] = parse_double(line.tokens[static_cast<std::size_t>(i)], field, line.number);
  }
  return v;
}

Vector read_vector_block(Reader& r, const std::string& field, Index count) {
  expect_key(r, field, 0);
  return read_values(r, field, count);
}

}  // namespace

std::string format_instance(const ProblemInstance& p) {
  p.validate();
  std::ostringstream os;
  os << kMagic << ' ' << kVersion << '\n';
  os << "kind " << to_string(p.kind) << '\n';
  os << "m " << p.m() << '\n';
  os << "n " << p.n() << '\n';
  os << "seed " << p.seed << '\n';
  os << "lambda " << format_double(p.penalty.lambda()) << '\n';
  os << "v " << format_double(p.penalty.v()) << '\n';
  os << "lf " << format_double(p.lf) << '\n';
  os << "A\n";
  for (Index i = 0; i < p.m(); ++i) write_row(os, p.A.row(i).transpose());
  os << "b\n";
  write_row(os, p.b);
  if (p.kind == LossKind::CensoredRegression) {
    os << "c\n";
    write_row(os, p.c);
  }
  os << "lower\n";
  write_row(os, p.box.lower());
  os << "upper\n";
  write_row(os, p.box.upper());
  os << "x0\n";
  write_row(os, p.x0);
  if (p.x_true) {
    os << "x_true\n";
    write_row(os, *p.x_true);
  }
  os << "end\n";
  return os.str();
}

ProblemInstance parse_instance(std::string_view text) {
  Reader r(text);
  {
    const Line& line = r.next("header");
    if (line.tokens.size() != 2 || line.tokens[0] != kMagic) {
      throw ParseError("header", line.number, "expected 'spge-instance 1'");
    }
    if (parse_integer(line.tokens[1], "header", line.number) != kVersion) {
      throw ParseError("header", line.number, "unsupported format version");
    }
  }
  ProblemInstance p;
  {
    const Line& line = expect_key(r, "kind", 1);
    try {
      p.kind = parse_loss_kind(line.tokens[1]);
    } catch (const std::invalid_argument& e) {
      throw ParseError("kind", line.number, e.what());
    }
  }
  const Line& m_line = expect_key(r, "m", 1);
  const long long m = parse_integer(m_line.tokens[1], "m", m_line.number);
  if (m < 1) throw ParseError("m", m_line.number, "must be positive");
  const Line& n_line = expect_key(r, "n", 1);
  const long long n = parse_integer(n_line.tokens[1], "n", n_line.number);
  if (n < 1) throw ParseError("n", n_line.number, "must be positive");
  {
    const Line& line = expect_key(r, "seed", 1);
    std::uint64_t seed = 0;
    const auto tok = line.tokens[1];
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), seed);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw ParseError("seed", line.number, "invalid unsigned integer");
    }
    p.seed = seed;
  }
  const Line& lambda_line = expect_key(r, "lambda", 1);
  const double lambda = parse_double(lambda_line.tokens[1], "lambda", lambda_line.number);
  const Line& v_line = expect_key(r, "v", 1);
  const double v = parse_double(v_line.tokens[1], "v", v_line.number);
  try {
    p.penalty = CappedL1Penalty(lambda, v);
  } catch (const std::invalid_argument& e) {
    throw ParseError("lambda", lambda_line.number, e.what());
  }
  if (!r.peek_keyword("A")) {
    const Line& line = expect_key(r, "lf", 1);
    p.lf = parse_double(line.tokens[1], "lf", line.number);
  }

  expect_key(r, "A", 0);
  p.A.resize(m, n);
  for (long long i = 0; i < m; ++i) p.A.row(i) = read_values(r, "A", n).transpose();
  p.b = read_vector_block(r, "b", m);
  if (p.kind == LossKind::CensoredRegression) p.c = read_vector_block(r, "c", m);
  Vector lower = read_vector_block(r, "lower", n);
  const Line* upper_line = nullptr;
  Vector upper;
  {
    upper_line = &expect_key(r, "upper", 0);
    upper = read_values(r, "upper", n);
  }
  try {
    p.box = BoxConstraint(std::move(lower), std::move(upper));
  } catch (const std::invalid_argument& e) {
    throw ParseError("upper", upper_line->number, e.what());
  }
  p.x0 = read_vector_block(r, "x0", n);
  if (r.peek_keyword("x_true")) p.x_true = read_vector_block(r, "x_true", n);
  const Line& end = r.next("end");
  if (end.tokens.size() != 1 || end.tokens[0] != "end") {
    throw ParseError("end", end.number, "expected 'end'");
  }
  if (!r.at_end()) {
    throw ParseError("end", r.next("end").number, "trailing content after 'end'");
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError("instance", end.number, e.what());
  }
  return p;
}

void save_instance(const ProblemInstance& instance, const std::filesystem::path& path) {
  const std::string text = format_instance(instance);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace spge
