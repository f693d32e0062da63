#include <cctype>
#include <fstream>

#include "arakelov/errors.hpp"
#include "arakelov/field.hpp"

namespace arakelov {

namespace {

using Poly = std::vector<Rational>;

Poly poly_add(Poly a, const Poly& b, const Rational& sign) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

bool is_constant(const Poly& p) {
  for (std::size_t i = 1; i < p.size(); ++i)
    if (p[i] != 0) return false;
  return true;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/')? unary)*      implicit multiplication allowed
// unary  := ('-'|'+') unary | power
// power  := atom ('^' integer)?
// atom   := integer | variable | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string text) : s_(std::move(text)) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw ValidationError("cannot parse polynomial '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  static bool is_var(char c) { return c == 'x' || c == 'a' || c == 't'; }

  Poly expr() {
    Poly acc = term();
    while (true) {
      const char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      acc = poly_add(acc, term(), c == '+' ? Rational(1) : Rational(-1));
    }
  }

  Poly term() {
    Poly acc = unary();
    while (true) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        acc = poly_mul(acc, unary());
      } else if (c == '/') {
        ++pos_;
        Poly d = unary();
        if (d.empty() || !is_constant(d) || d[0] == 0) fail("division by a non-constant or zero");
        for (auto& x : acc) x /= d[0];
      } else if (c == '(' || is_var(c) || std::isdigit(static_cast<unsigned char>(c))) {
        acc = poly_mul(acc, unary());
      } else {
        return acc;
      }
    }
  }

  Poly unary() {
    const char c = peek();
    if (c == '-' || c == '+') {
      ++pos_;
      Poly p = unary();
      if (c == '-')
        for (auto& x : p) x = -x;
      return p;
    }
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (peek() != '^') return base;
    ++pos_;
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a non-negative integer");
    const int e = std::stoi(s_.substr(start, pos_ - start));
    if (e > 64) fail("exponent too large");
    Poly out{Rational(1)};
    for (int i = 0; i < e; ++i) out = poly_mul(out, base);
    return out;
  }

  Poly atom() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (peek() != ')') fail("missing ')'");
      ++pos_;
      return p;
    }
    if (is_var(c)) {
      ++pos_;
      return {Rational(0), Rational(1)};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return {Rational(BigInt(s_.substr(start, pos_ - start)))};
    }
    fail(c == '\0' ? "unexpected end" : "unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

Rational json_rational(const nlohmann::json& v) {
  if (v.is_number_integer()) return Rational(BigInt(v.get<long long>()));
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ValidationError("expected an integer or a \"p/q\" string, got " + v.dump());
}

BigInt json_integer(const nlohmann::json& v) {
  const Rational q = json_rational(v);
  if (!is_integral(q)) throw ValidationError("expected an integer, got " + v.dump());
  return boost::multiprecision::numerator(q);
}

RationalMatrix json_matrix(const nlohmann::json& v, std::size_t n) {
  if (!v.is_array() || v.size() != n) throw ValidationError("matrix must have " + std::to_string(n) + " rows");
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_array() || v[i].size() != n) throw ValidationError("matrix rows must have length " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) m(i, j) = json_rational(v[i][j]);
  }
  return m;
}

}  // namespace

Rational rational_from_json(const nlohmann::json& v) { return json_rational(v); }

RationalMatrix rational_matrix_from_json(const nlohmann::json& v, std::size_t n) { return json_matrix(v, n); }

RationalVector parse_polynomial(const std::string& text) {
  Poly p = Parser(text).parse();
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

FieldPtr field_from_descriptor(const nlohmann::json& d) {
  if (!d.is_object()) throw ValidationError("field descriptor must be a JSON object");
  if (!d.contains("polynomial") || !d["polynomial"].is_array())
    throw ValidationError("field descriptor needs a 'polynomial' array");
  FieldSpec spec;
  for (const auto& c : d["polynomial"]) spec.polynomial.push_back(json_integer(c));
  if (spec.polynomial.size() < 2) throw ValidationError("polynomial must have degree >= 1");
  const std::size_t n = spec.polynomial.size() - 1;
  spec.name = d.value("name", std::string("descriptor field"));

  if (d.contains("integral_basis")) {
    const auto& b = d["integral_basis"];
    if (!b.is_array()) throw ValidationError("'integral_basis' must be an array of strings");
    for (const auto& e : b) {
      if (!e.is_string()) throw ValidationError("integral basis entries must be polynomial strings");
      RationalVector coeffs = parse_polynomial(e.get<std::string>());
      if (coeffs.size() > n) throw ValidationError("integral basis element has degree >= n");
      coeffs.resize(n, Rational(0));
      spec.basis.push_back(std::move(coeffs));
    }
  }
  if (d.contains("w")) {
    if (!d["w"].is_number_integer() || d["w"].get<int>() <= 0) throw ValidationError("'w' must be a positive integer");
    spec.roots_of_unity = d["w"].get<int>();
  } else if (n > 2) {
    throw ValidationError("'w' is required for fields of degree > 2");
  }
  if (d.contains("units"))
    for (const auto& u : d["units"]) {
      if (!u.is_array() || u.size() != n) throw ValidationError("unit coordinates must have length n");
      RationalVector c;
      for (const auto& x : u) c.push_back(json_rational(x));
      spec.units.push_back(std::move(c));
    }
  if (d.contains("class_representatives"))
    for (const auto& m : d["class_representatives"]) spec.class_representatives.push_back(json_matrix(m, n));
  if (d.contains("class_number")) spec.class_number = d["class_number"].get<int>();
  if (d.contains("dedekind_coefficients"))
    for (const auto& a : d["dedekind_coefficients"]) {
      if (!a.is_number_integer() || a.get<long long>() < 0) throw ValidationError("Dirichlet coefficients must be non-negative integers");
      spec.dedekind_coefficients.push_back(a.get<std::int64_t>());
    }
  return std::make_shared<const NumberField>(std::move(spec));
}

FieldPtr field_from_descriptor_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open descriptor " + path.string());
  nlohmann::json d;
  try {
    in >> d;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed descriptor " + path.string() + ": " + e.what());
  }
  auto field = field_from_descriptor(d);
  return field;
}

}  // namespace arakelov
