#include <doctest.h>

#include <cmath>
#include <random>

#include "arakelov/errors.hpp"
#include "arakelov/field.hpp"

using namespace arakelov;

namespace {

nlohmann::json zeta5_descriptor() { return {{"polynomial", {1, 1, 1, 1, 1}}, {"w", 10}}; }
nlohmann::json zeta7plus_descriptor() { return {{"polynomial", {-1, -2, 1, 1}}, {"w", 2}}; }

// Discriminant via the Sylvester resultant: disc = (-1)^(n(n-1)/2) Res(p, p').
BigInt resultant_discriminant(const std::vector<long>& p) {
  const std::size_t n = p.size() - 1;
  std::vector<long> dp;
  for (std::size_t k = 1; k <= n; ++k) dp.push_back(static_cast<long>(k) * p[k]);
  const std::size_t m = n - 1;
  const std::size_t size = n + m;
  RationalMatrix s(size, size);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t k = 0; k <= n; ++k) s(r, r + k) = p[n - k];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k <= m; ++k) s(m + r, r + k) = dp[m - k];
  Rational res = determinant(s);
  if ((n * (n - 1) / 2) % 2 == 1) res = -res;
  return boost::multiprecision::numerator(res);
}

FieldElement random_element(const NumberField& f, std::mt19937& rng, int range = 6) {
  std::uniform_int_distribution<int> d(-range, range);
  RationalVector c;
  for (int i = 0; i < f.degree(); ++i) c.emplace_back(d(rng));
  return f.element(c);
}

}  // namespace

TEST_CASE("quadratic field invariants") {
  auto f73 = quadratic_field(73);
  CHECK(f73->discriminant() == 73);
  CHECK(f73->r1() == 2);
  CHECK(f73->integral_basis().row(1) == RationalVector{Rational(1, 2), Rational(1, 2)});
  CHECK(std::abs(*f73->regulator() - 7.666690419258288) < 1e-12);
  const double reg_oracle = std::log(1068.0L + 125.0L * std::sqrt(73.0L));
  CHECK(std::abs(*f73->regulator() - reg_oracle) < 1e-12);

  auto f41 = quadratic_field(41);
  CHECK(f41->discriminant() == 41);
  CHECK(std::abs(*f41->regulator() - 4.159127134626180) < 1e-12);

  auto gi = quadratic_field(-1);
  CHECK(gi->discriminant() == -4);
  CHECK(gi->r1() == 0);
  CHECK(gi->r2() == 1);
  CHECK(gi->roots_of_unity() == 4);
  CHECK(quadratic_field(-3)->roots_of_unity() == 6);
  CHECK(quadratic_field(-5)->roots_of_unity() == 2);
  CHECK(quadratic_field(3)->discriminant() == 12);

  CHECK_THROWS_AS(quadratic_field(12), ValidationError);
  CHECK_THROWS_AS(quadratic_field(1), ValidationError);
  CHECK_THROWS_AS(quadratic_field(0), ValidationError);
}

TEST_CASE("trace determinant equals discriminant") {
  for (std::int64_t m : {-7, -5, -3, -1, 2, 3, 5, 41, 73}) {
    auto f = quadratic_field(m);
    CHECK(determinant(f->trace_matrix()) == Rational(f->discriminant()));
  }
}

TEST_CASE("fundamental units") {
  for (std::int64_t m : {2, 3, 5, 6, 7, 13, 41, 73, 94}) {
    auto f = quadratic_field(m);
    const auto& eps = f->units()->fundamental_units.front();
    const Rational n = f->norm(eps);
    CHECK((n == 1 || n == -1));
    const double log_s1 = std::log(std::abs(f->embed(eps, 0)));
    CHECK(std::abs(log_s1 - *f->regulator()) < 1e-12);
    CHECK(f->embed(eps, 0).real() > 1);
  }
  // m = 94: fundamental unit 2143295 + 221064 sqrt(94)
  auto f94 = quadratic_field(94);
  CHECK(f94->units()->fundamental_units.front().coords == RationalVector{Rational(2143295), Rational(221064)});
}

TEST_CASE("class numbers of quadratic fields") {
  CHECK(quadratic_class_number(-1) == 1);
  CHECK(quadratic_class_number(-5) == 2);
  CHECK(quadratic_class_number(-23) == 3);
  CHECK(quadratic_class_number(-47) == 5);
  CHECK(quadratic_class_number(-163) == 1);
  CHECK(quadratic_class_number(3) == 1);
  CHECK(quadratic_class_number(10) == 2);
  CHECK(quadratic_class_number(79) == 3);
  CHECK(quadratic_class_number(73) == 1);
  CHECK(quadratic_class_number(41) == 1);
  CHECK(quadratic_class_number(229) == 3);
  // Representatives are ideals, the first one trivial.
  auto f = quadratic_field(-23);
  REQUIRE(f->class_representatives().size() == 3);
  CHECK(f->class_representatives().front() == RationalMatrix::identity(2));
  for (const auto& rep : f->class_representatives()) CHECK(FractionalIdeal(f, rep).is_module_over_integers());
}

TEST_CASE("descriptor fields") {
  auto gi = field_from_descriptor({{"polynomial", {1, 0, 1}}});
  auto ref = quadratic_field(-1);
  CHECK(gi->discriminant() == ref->discriminant());
  CHECK(gi->r1() == ref->r1());
  CHECK(gi->r2() == ref->r2());
  CHECK(gi->roots_of_unity() == ref->roots_of_unity());

  auto z5 = field_from_descriptor(zeta5_descriptor());
  CHECK(z5->discriminant() == 125);
  CHECK(resultant_discriminant({1, 1, 1, 1, 1}) == 125);
  CHECK(z5->r1() == 0);
  CHECK(z5->r2() == 2);

  auto z7 = field_from_descriptor(zeta7plus_descriptor());
  CHECK(z7->discriminant() == 49);
  CHECK(resultant_discriminant({-1, -2, 1, 1}) == 49);
  CHECK(z7->r1() == 3);
  CHECK(z7->r2() == 0);

  for (const auto& field : {z5, z7})
    for (const auto& z : field->roots()) {
      ExtComplex acc(0);
      for (std::size_t k = field->polynomial().size(); k-- > 0;) acc = acc * z + ExtComplex(ExtReal(field->polynomial()[k]));
      CHECK(abs(acc) < ExtReal("1e-30"));
    }

  nlohmann::json q73 = {{"polynomial", {-73, 0, 1}}, {"integral_basis", {"1", "(1+x)/2"}}};
  CHECK(field_from_descriptor(q73)->discriminant() == 73);
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {-1, 0, 1}}}), ValidationError);           // x^2 - 1
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {4, 0, 0, 0, 1}}, {"w", 4}}), ValidationError);  // x^4 + 4
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {1, 0, 2, 0, 1}}, {"w", 4}}), ValidationError);  // (x^2+1)^2
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {1, 0, 2}}}), ValidationError);            // non-monic
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {1, 1, 1, 1, 1}}}), ValidationError);      // w missing
  CHECK_THROWS_AS(field_from_descriptor({{"polynomial", {5, 0, 1}}, {"integral_basis", {"1", "(1+x)/2"}}}),
                  ValidationError);  // not an order
}

TEST_CASE("polynomial parser") {
  CHECK(parse_polynomial("(1+x)/2") == RationalVector{Rational(1, 2), Rational(1, 2)});
  CHECK(parse_polynomial("1/3*x^2 - 2") == RationalVector{Rational(-2), Rational(0), Rational(1, 3)});
  CHECK(parse_polynomial("2x^3 + a") == RationalVector{Rational(0), Rational(1), Rational(0), Rational(2)});
  CHECK(parse_polynomial("-(x-1)^2") == RationalVector{Rational(-1), Rational(2), Rational(-1)});
  CHECK_THROWS_AS(parse_polynomial("x/(x+1)"), ValidationError);
  CHECK_THROWS_AS(parse_polynomial("y+1"), ValidationError);
}

TEST_CASE("element arithmetic matches polynomial arithmetic") {
  auto f = quadratic_field(73);
  // omega^2 = omega + 18 for omega = (1 + sqrt 73)/2.
  const FieldElement w = f->element({Rational(0), Rational(1)});
  CHECK(f->mul(w, w).coords == RationalVector{Rational(18), Rational(1)});
  const FieldElement g = f->from_power_basis({Rational(9, 2), Rational(1, 2)});
  CHECK(f->norm(g) == 2);
  CHECK(f->trace(g) == 9);
  CHECK(f->mul(g, f->inv(g)) == f->one());
}

TEST_CASE("codifferent") {
  auto q = rational_field();
  CHECK(codifferent(q).norm() == 1);
  CHECK(codifferent(q).basis() == RationalMatrix::identity(1));

  auto gi = quadratic_field(-1);
  auto cd = codifferent(gi);
  CHECK(cd.norm() == Rational(1, 4));
  CHECK(cd.basis() == Rational(1, 2) * RationalMatrix::identity(2));
  CHECK(different(gi) == FractionalIdeal::principal(gi, gi->element({Rational(2), Rational(0)})));

  auto z5 = field_from_descriptor(zeta5_descriptor());
  CHECK(codifferent(z5).norm() == Rational(1, 125));
  CHECK(codifferent(z5).is_module_over_integers());
  for (std::int64_t m : {-3, 41, 73}) {
    auto f = quadratic_field(m);
    CHECK(codifferent(f).is_module_over_integers());
    CHECK(codifferent(f).norm() == Rational(1) / Rational(abs(f->discriminant())));
  }
}

TEST_CASE("ideal multiplication") {
  auto gi = quadratic_field(-1);
  auto one_plus_i = FractionalIdeal::principal(gi, gi->element({Rational(1), Rational(1)}));
  auto one_minus_i = FractionalIdeal::principal(gi, gi->element({Rational(1), Rational(-1)}));
  auto prod = ideal_mul(one_plus_i, one_minus_i);
  CHECK(prod.norm() == 4);
  CHECK(prod == FractionalIdeal::principal(gi, gi->element({Rational(2), Rational(0)})));
  CHECK(ideal_mul(one_plus_i, FractionalIdeal::ring_of_integers(gi)) == one_plus_i);

  std::mt19937 rng(7);
  for (const auto& f : {quadratic_field(73), quadratic_field(-3), field_from_descriptor(zeta5_descriptor()),
                        field_from_descriptor(zeta7plus_descriptor())}) {
    for (int t = 0; t < 6; ++t) {
      FieldElement a = random_element(*f, rng), b = random_element(*f, rng);
      if (f->is_zero(a) || f->is_zero(b)) continue;
      auto ia = FractionalIdeal::principal(f, a), ib = FractionalIdeal::principal(f, b);
      CHECK(ideal_mul(ia, ib).norm() == ia.norm() * ib.norm());
      // |N(a)| from the embeddings.
      double prod_abs = 1;
      for (int p = 0; p < f->place_count(); ++p)
        prod_abs *= std::pow(std::abs(f->embed(a, p)), f->is_complex_place(p) ? 2 : 1);
      CHECK(std::abs(prod_abs - to_double(ia.norm())) <= 1e-10 * to_double(ia.norm()));
      CHECK(ideal_inverse(ia) == FractionalIdeal::principal(f, f->inv(a)));
      CHECK(ideal_mul(ia, ideal_inverse(ia)) == FractionalIdeal::ring_of_integers(f));
      CHECK(trace_dual(trace_dual(ia)) == ia);
    }
  }
  CHECK_THROWS_AS(ideal_mul(one_plus_i, FractionalIdeal::ring_of_integers(quadratic_field(-3))), ValidationError);
}

TEST_CASE("canonical forms are unique") {
  auto f = quadratic_field(73);
  RationalMatrix g1(2, 2, {Rational(2), Rational(0), Rational(0), Rational(1)});
  RationalMatrix g2(3, 2, {Rational(4), Rational(1), Rational(2), Rational(1), Rational(-2), Rational(0)});
  FractionalIdeal a(f, g1), b(f, g2);
  CHECK(a.basis() == b.basis());
  CHECK(a.norm() == 2);
}

TEST_CASE("contains one") {
  auto q = rational_field();
  CHECK(ideal_contains_one(FractionalIdeal::ring_of_integers(q)));
  CHECK(ideal_contains_one(FractionalIdeal(q, RationalMatrix(1, 1, {Rational(1, 2)}))));
  CHECK_FALSE(ideal_contains_one(FractionalIdeal(q, RationalMatrix(1, 1, {Rational(2)}))));
}

TEST_CASE("Dirichlet coefficients") {
  CHECK(dedekind_coefficients(*rational_field(), 5) == std::vector<std::int64_t>{1, 1, 1, 1, 1});
  CHECK(dedekind_coefficients(*quadratic_field(-1), 5) == std::vector<std::int64_t>{1, 1, 0, 1, 2});
  CHECK(dedekind_coefficients(*quadratic_field(73), 2)[1] == 2);

  // Gaussian ideals of norm k correspond to a + bi with a > 0, b >= 0.
  const auto a = dedekind_coefficients(*quadratic_field(-1), 500);
  for (int k = 1; k <= 500; ++k) {
    std::int64_t count = 0;
    for (int x = 1; x * x <= k; ++x)
      for (int y = 0; x * x + y * y <= k; ++y)
        if (x * x + y * y == k) ++count;
    CHECK(a[static_cast<std::size_t>(k - 1)] == count);
  }
  CHECK_THROWS_AS(dedekind_coefficients(*field_from_descriptor(zeta5_descriptor()), 10), UnsupportedFieldError);
}
