#include "roughalg/serialization.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace roughalg::serialization {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument(msg);
}

// Level sizes grow as dim^k; refuse documents whose flat storage would not
// fit a sane budget instead of letting vector throw bad_alloc.
constexpr std::size_t kMaxEntries = std::size_t{1} << 26;

std::size_t checked_pow(std::size_t base, int exp, const std::string& what) {
  std::size_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > kMaxEntries / base) fail(what + ": level sizes overflow");
    out *= base;
  }
  return out;
}

const json& require_key(const json& doc, const char* key,
                        const std::string& what) {
  if (!doc.is_object() || !doc.contains(key))
    fail(what + ": missing key \"" + key + "\"");
  return doc.at(key);
}

int require_int(const json& doc, const char* key, const std::string& what) {
  const json& v = require_key(doc, key, what);
  if (!v.is_number_integer())
    fail(what + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

std::vector<double> require_doubles(const json& arr, const std::string& what,
                                    std::size_t size) {
  if (!arr.is_array()) fail(what + " must be an array");
  if (arr.size() != size)
    fail(what + " must hold " + std::to_string(size) + " numbers, got " +
         std::to_string(arr.size()));
  std::vector<double> out;
  out.reserve(size);
  for (const auto& v : arr) {
    if (!v.is_number()) fail(what + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

words::Int coeff_from_string(const std::string& s) {
  std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
  if (i == s.size()) fail("coeff is not a decimal integer: \"" + s + "\"");
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      fail("coeff is not a decimal integer: \"" + s + "\"");
  return words::Int(s);
}

// Shared reader for the two linear combination formats; the permutation
// variant validates each word through Permutation's constructor.
template <class Basis, class MakeBasis>
words::LinearCombination<Basis> combination_from_json(const json& doc,
                                                      MakeBasis&& make) {
  const json& terms = require_key(doc, "terms", "combination");
  if (!terms.is_array()) fail("combination: \"terms\" must be an array");
  words::LinearCombination<Basis> out;
  for (const auto& term : terms) {
    const json& w = require_key(term, "word", "term");
    if (!w.is_array()) fail("term: \"word\" must be an array of integers");
    std::vector<int> letters;
    letters.reserve(w.size());
    for (const auto& l : w) {
      if (!l.is_number_integer())
        fail("term: \"word\" must be an array of integers");
      letters.push_back(l.get<int>());
    }
    const json& c = require_key(term, "coeff", "term");
    if (!c.is_string()) fail("term: \"coeff\" must be a decimal string");
    out.add(make(std::move(letters)),
            coeff_from_string(c.get<std::string>()));
  }
  return out;
}

template <class Basis>
json combination_to_json(const words::LinearCombination<Basis>& p) {
  json terms = json::array();
  for (const auto& [basis, c] : p.terms()) {
    json word = json::array();
    if constexpr (std::is_same_v<Basis, words::Word>) {
      for (int l : basis.letters) word.push_back(l);
    } else {
      for (int l : basis.images()) word.push_back(l);
    }
    terms.push_back(json{{"word", std::move(word)}, {"coeff", c.str()}});
  }
  return json{{"terms", std::move(terms)}};
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double_field(const std::string& field, int line_no,
                          const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    fail("line " + std::to_string(line_no) + ": cannot parse \"" + field +
         "\" in column " + column);
  if (!std::isfinite(value))
    fail("line " + std::to_string(line_no) + ": column " + column +
         " is not finite");
  return value;
}

std::string read_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) fail(filename + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) fail(filename + ": read failed");
  return buf.str();
}

}  // namespace

json word_polynomial_to_json(const words::WordPolynomial& p) {
  return combination_to_json(p);
}

words::WordPolynomial word_polynomial_from_json(const json& doc) {
  return combination_from_json<words::Word>(
      doc, [](std::vector<int> ls) { return words::Word(std::move(ls)); });
}

json permutation_sum_to_json(const words::PermutationSum& s) {
  return combination_to_json(s);
}

words::PermutationSum permutation_sum_from_json(const json& doc) {
  return combination_from_json<words::Permutation>(
      doc,
      [](std::vector<int> ls) { return words::Permutation(std::move(ls)); });
}

json tensor_to_json(const tensor::TruncatedTensorSeries& ts) {
  json levels = json::array();
  for (int k = 0; k <= ts.depth(); ++k) levels.push_back(ts.level(k));
  return json{{"dim", ts.dim()}, {"depth", ts.depth()},
              {"levels", std::move(levels)}};
}

tensor::TruncatedTensorSeries tensor_from_json(const json& doc) {
  const int dim = require_int(doc, "dim", "tensor");
  const int depth = require_int(doc, "depth", "tensor");
  if (dim < 1) fail("tensor: \"dim\" must be at least 1");
  if (depth < 0) fail("tensor: \"depth\" must be nonnegative");
  const json& levels = require_key(doc, "levels", "tensor");
  if (!levels.is_array() ||
      levels.size() != static_cast<std::size_t>(depth) + 1)
    fail("tensor: \"levels\" must hold depth+1 arrays");
  tensor::TruncatedTensorSeries out(dim, depth);
  for (int k = 0; k <= depth; ++k) {
    const std::size_t size =
        checked_pow(static_cast<std::size_t>(dim), k, "tensor");
    out.level(k) = require_doubles(
        levels[static_cast<std::size_t>(k)],
        "tensor: levels[" + std::to_string(k) + "]", size);
  }
  return out;
}

json one_form_to_json(const oneforms::PolynomialOneForm& form) {
  json coeffs = json::array();
  for (int k = 0; k <= form.degree(); ++k) coeffs.push_back(form.coeff(k));
  return json{{"dim_in", form.dim_in()},
              {"dim_out", form.dim_out()},
              {"degree", form.degree()},
              {"coeffs", std::move(coeffs)}};
}

oneforms::PolynomialOneForm one_form_from_json(const json& doc) {
  const int dim_in = require_int(doc, "dim_in", "one form");
  const int dim_out = require_int(doc, "dim_out", "one form");
  const int degree = require_int(doc, "degree", "one form");
  if (dim_in < 1) fail("one form: \"dim_in\" must be at least 1");
  if (dim_out < 1) fail("one form: \"dim_out\" must be at least 1");
  if (degree < 0) fail("one form: \"degree\" must be nonnegative");
  const json& coeffs = require_key(doc, "coeffs", "one form");
  if (!coeffs.is_array() ||
      coeffs.size() != static_cast<std::size_t>(degree) + 1)
    fail("one form: \"coeffs\" must hold degree+1 arrays");
  std::vector<std::vector<double>> levels;
  levels.reserve(coeffs.size());
  for (int k = 0; k <= degree; ++k) {
    const std::size_t size =
        static_cast<std::size_t>(dim_out) *
        checked_pow(static_cast<std::size_t>(dim_in), k + 1, "one form");
    levels.push_back(require_doubles(
        coeffs[static_cast<std::size_t>(k)],
        "one form: coeffs[" + std::to_string(k) + "]", size));
  }
  return oneforms::PolynomialOneForm(dim_in, dim_out, degree,
                                     std::move(levels));
}

paths::PiecewiseLinearPath path_from_csv_text(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  if (lines.empty()) fail("missing header: expected t,x1,...,xd");
  const auto header = split_fields(lines[0]);
  if (header.size() < 2 || header[0] != "t")
    fail("bad header: expected t,x1,...,xd");
  const int dim = static_cast<int>(header.size()) - 1;
  for (int j = 1; j <= dim; ++j)
    if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j))
      fail("bad header: expected t,x1,...,xd");

  std::vector<double> times;
  std::vector<std::vector<double>> points;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    if (lines[i].empty())
      fail("line " + std::to_string(line_no) + ": blank line inside data");
    const auto fields = split_fields(lines[i]);
    if (fields.size() != header.size())
      fail("line " + std::to_string(line_no) + ": expected " +
           std::to_string(header.size()) + " fields, got " +
           std::to_string(fields.size()));
    const double t = parse_double_field(fields[0], line_no, "t");
    if (!times.empty() && !(times.back() < t))
      fail("line " + std::to_string(line_no) +
           ": times must strictly increase");
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (int j = 1; j <= dim; ++j)
      row[static_cast<std::size_t>(j - 1)] = parse_double_field(
          fields[static_cast<std::size_t>(j)], line_no,
          header[static_cast<std::size_t>(j)]);
    times.push_back(t);
    points.push_back(std::move(row));
  }
  if (times.size() < 2) fail("need at least two data rows");
  return paths::PiecewiseLinearPath(std::move(times), std::move(points));
}

paths::PiecewiseLinearPath path_from_csv_file(const std::string& filename) {
  const std::string text = read_file(filename);
  try {
    return path_from_csv_text(text);
  } catch (const std::invalid_argument& e) {
    fail(filename + ": " + e.what());
  }
}

json load_json_file(const std::string& filename) {
  const std::string text = read_file(filename);
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(filename + ": " + e.what());
  }
}

}  // namespace roughalg::serialization
