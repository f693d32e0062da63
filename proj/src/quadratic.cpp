#include <algorithm>
#include <map>
#include <numeric>

#include "arakelov/errors.hpp"
#include "arakelov/field.hpp"

namespace arakelov {

namespace {

BigInt field_discriminant(std::int64_t m) { return (((m % 4) + 4) % 4 == 1) ? BigInt(m) : BigInt(4) * m; }

bool is_reduced_indefinite(const BigInt& a, const BigInt& b, const BigInt& disc) {
  if (b <= 0 || b * b >= disc) return false;
  const BigInt two_a = 2 * abs(a);
  if ((two_a + b) * (two_a + b) <= disc) return false;  // sqrt(D) - b < 2|a|
  const BigInt t = two_a - b;                            // 2|a| < sqrt(D) + b
  return t <= 0 || t * t < disc;
}

BinaryForm rho(const BinaryForm& f, const BigInt& disc) {
  const BigInt s = isqrt(disc);
  const BigInt t = 2 * abs(f.c);
  BigInt r = (s + f.b) % t;
  if (r < 0) r += t;
  const BigInt b = s - r;
  return {f.c, b, (b * b - disc) / (4 * f.c)};
}

// Coordinates of the ideal |a| Z + ((-b + sqrt D)/2) Z over the integral basis.
RationalMatrix form_ideal(const BinaryForm& f, std::int64_t m) {
  RationalMatrix gens(2, 2);
  gens(0, 0) = Rational(abs(f.a));
  if (((m % 4) + 4) % 4 == 1)
    gens(1, 0) = Rational(-f.b - 1, 2);
  else
    gens(1, 0) = Rational(-f.b, 2);
  gens(1, 1) = 1;
  return hermite_normal_form(gens);
}

struct ClassData {
  int class_number = 0;
  std::vector<RationalMatrix> representatives;
};

ClassData quadratic_classes(std::int64_t m) {
  const BigInt disc = field_discriminant(m);
  auto forms = reduced_forms(disc);
  ClassData out;
  if (disc < 0) {
    // Principal form first.
    std::stable_sort(forms.begin(), forms.end(), [](const BinaryForm& x, const BinaryForm& y) { return x.a < y.a; });
    out.class_number = static_cast<int>(forms.size());
    for (const auto& f : forms) out.representatives.push_back(form_ideal(f, m));
    return out;
  }
  // Real case: rho-cycles are narrow classes; (a,b,c) ~ (-a,b,-c) merges
  // them into wide classes.
  std::map<std::pair<BigInt, BigInt>, std::size_t> index;
  for (std::size_t i = 0; i < forms.size(); ++i) index[{forms[i].a, forms[i].b}] = i;
  std::vector<std::size_t> parent(forms.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const BinaryForm next = rho(forms[i], disc);
    auto it = index.find({next.a, next.b});
    if (it == index.end()) throw NumericError("reduction cycle left the reduced forms");
    unite(i, it->second);
    auto neg = index.find({-forms[i].a, forms[i].b});
    if (neg != index.end()) unite(i, neg->second);
  }
  // One representative per class; the class of the form with a = 1 first.
  std::vector<std::size_t> order(forms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const bool px = forms[x].a == 1, py = forms[y].a == 1;
    if (px != py) return px;
    if (abs(forms[x].a) != abs(forms[y].a)) return abs(forms[x].a) < abs(forms[y].a);
    return forms[x].b < forms[y].b;
  });
  std::vector<bool> seen(forms.size(), false);
  for (std::size_t i : order) {
    const std::size_t root = find(i);
    if (seen[root]) continue;
    seen[root] = true;
    out.representatives.push_back(form_ideal(forms[i], m));
  }
  out.class_number = static_cast<int>(out.representatives.size());
  return out;
}

// Fundamental unit from the continued fraction of omega, returned as
// integral-basis coordinates (1, omega) with value > 1 at the first place.
RationalVector fundamental_unit(std::int64_t m) {
  const bool one_mod_4 = (m % 4) == 1;
  const BigInt d(m);
  const BigInt s = isqrt(d);
  BigInt P = one_mod_4 ? 1 : 0;
  BigInt Q = one_mod_4 ? 2 : 1;
  BigInt p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int iter = 0; iter < 1000000; ++iter) {
    const BigInt a = Q > 0 ? floor_div(P + s, Q) : floor_div(P + s + 1, Q);
    const BigInt p = a * p_prev + p_prev2;
    const BigInt q = a * q_prev + q_prev2;
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    // Norm of p - q*omega.
    const BigInt norm = one_mod_4 ? BigInt(p * p - p * q - q * q * ((d - 1) / 4)) : BigInt(p * p - d * q * q);
    if (q >= 1 && (norm == 1 || norm == -1)) {
      // (p - q w)^-1 = N * conj(p - q w); conj(w) = 1 - w or -w.
      BigInt x = one_mod_4 ? BigInt(norm * (p - q)) : BigInt(norm * p);
      BigInt y = norm * q;
      // The first place sends sqrt(m) to the positive root.
      const ExtReal root = sqrt(ExtReal(d));
      const ExtReal omega = one_mod_4 ? (1 + root) / 2 : root;
      if (ExtReal(x) + ExtReal(y) * omega < 0) {
        x = -x;
        y = -y;
      }
      return {Rational(x), Rational(y)};
    }
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
  throw NumericError("continued fraction expansion did not reach a unit");
}

}  // namespace

bool is_squarefree(std::int64_t m) {
  if (m == 0) return false;
  std::int64_t x = m < 0 ? -m : m;
  for (std::int64_t p = 2; p * p <= x; ++p)
    if (x % (p * p) == 0) return false;
  return true;
}

int kronecker_symbol(const BigInt& d, std::int64_t p) {
  if (p == 2) {
    if (d % 2 == 0) return 0;
    BigInt r = d % 8;
    if (r < 0) r += 8;
    return (r == 1 || r == 7) ? 1 : -1;
  }
  BigInt r = d % p;
  if (r < 0) r += p;
  if (r == 0) return 0;
  const BigInt e = powm(r, BigInt((p - 1) / 2), BigInt(p));
  return e == 1 ? 1 : -1;
}

std::vector<BinaryForm> reduced_forms(const BigInt& disc) {
  std::vector<BinaryForm> out;
  if (disc < 0) {
    const BigInt D = -disc;
    // |b| <= a <= c, b >= 0 if |b| = a or a = c; a <= sqrt(D/3).
    for (BigInt a = 1; 3 * a * a <= D; ++a)
      for (BigInt b = -a + 1; b <= a; ++b) {
        const BigInt num = b * b - disc;
        if (num % (4 * a) != 0) continue;
        const BigInt c = num / (4 * a);
        if (c < a) continue;
        if (a == c && b < 0) continue;
        if (gcd(gcd(a, abs(b)), c) != 1) continue;
        out.push_back({a, b, c});
      }
    return out;
  }
  const BigInt s = isqrt(disc);
  for (BigInt b = 1; b <= s; ++b) {
    if ((b - disc) % 2 != 0) continue;
    const BigInt prod = (disc - b * b) / 4;  // -a*c
    for (BigInt a = 1; a <= prod; ++a) {
      if (prod % a != 0) continue;
      for (int sgn : {1, -1}) {
        const BigInt sa = sgn * a;
        if (!is_reduced_indefinite(sa, b, disc)) continue;
        const BigInt c = -prod / sa;
        if (gcd(gcd(a, b), abs(c)) != 1) continue;
        out.push_back({sa, b, c});
      }
    }
  }
  return out;
}

int quadratic_class_number(std::int64_t m) {
  if (!is_squarefree(m) || m == 1) throw ValidationError("m must be squarefree and different from 0 and 1");
  return quadratic_classes(m).class_number;
}

FieldPtr quadratic_field(std::int64_t m) {
  if (m == 0 || m == 1 || !is_squarefree(m))
    throw ValidationError("quadratic_field needs a squarefree m other than 0 and 1, got " + std::to_string(m));
  FieldSpec spec;
  spec.name = "Q(sqrt(" + std::to_string(m) + "))";
  spec.polynomial = {BigInt(-m), BigInt(0), BigInt(1)};
  if (((m % 4) + 4) % 4 == 1)
    spec.basis = {{Rational(1), Rational(0)}, {Rational(1, 2), Rational(1, 2)}};
  else
    spec.basis = {{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
  spec.roots_of_unity = m == -1 ? 4 : (m == -3 ? 6 : 2);
  spec.quadratic_m = m;
  if (m > 0) spec.units = {fundamental_unit(m)};
  auto classes = quadratic_classes(m);
  spec.class_number = classes.class_number;
  spec.class_representatives = std::move(classes.representatives);
  return std::make_shared<const NumberField>(std::move(spec));
}

std::vector<std::int64_t> dedekind_coefficients(const NumberField& field, std::size_t count) {
  if (field.degree() > 2) {
    const auto& supplied = field.supplied_dedekind_coefficients();
    if (supplied.size() >= count) return {supplied.begin(), supplied.begin() + static_cast<std::ptrdiff_t>(count)};
    throw UnsupportedFieldError("Dirichlet coefficients of degree > 2 fields must come from the descriptor (" +
                                std::to_string(supplied.size()) + " supplied, " + std::to_string(count) + " needed)");
  }
  std::vector<std::int64_t> a(count + 1, 0);
  if (count == 0) return {};
  std::vector<std::int64_t> spf(count + 1, 0);
  for (std::size_t i = 2; i <= count; ++i)
    if (spf[i] == 0)
      for (std::size_t j = i; j <= count; j += i)
        if (spf[j] == 0) spf[j] = static_cast<std::int64_t>(i);
  const BigInt disc = field.discriminant();
  std::map<std::int64_t, int> chi;
  a[1] = 1;
  for (std::size_t k = 2; k <= count; ++k) {
    const std::int64_t p = spf[k];
    std::size_t rest = k;
    int e = 0;
    while (rest % static_cast<std::size_t>(p) == 0) {
      rest /= static_cast<std::size_t>(p);
      ++e;
    }
    std::int64_t local = 1;
    if (field.degree() == 2) {
      auto it = chi.find(p);
      if (it == chi.end()) it = chi.emplace(p, kronecker_symbol(disc, p)).first;
      if (it->second == 1)
        local = e + 1;
      else if (it->second == -1)
        local = (e % 2 == 0) ? 1 : 0;
    }
    a[k] = local * a[rest];
  }
  return {a.begin() + 1, a.end()};
}

}  // namespace arakelov
