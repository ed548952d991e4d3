#include <gtest/gtest.h>

#include "linex/cyclo.hpp"
#include "linex/errors.hpp"
#include "linex/gf.hpp"
#include "linex/surd.hpp"

using namespace linex;

namespace {
const std::vector<long> kSmallQ = {2, 3, 4, 5, 7, 8, 9};
}

TEST(FieldArith, CharacteristicTwoAddition) {
  const Field& f = Field::get(2);
  EXPECT_EQ(fq_arith(Fq(f, 1), Fq(f, 1), ArithOp::add), Fq(f, 0));
}

TEST(FieldArith, QuarticReduction) {
  const Field& f = Field::get(4);
  EXPECT_EQ(f.spec().modulus, (std::vector<int>{1, 1, 1}));
  Fq x = Fq::from_coeffs(f, std::vector<int>{0, 1});
  Fq x_plus_1 = Fq::from_coeffs(f, std::vector<int>{1, 1});
  EXPECT_EQ(fq_arith(x, x, ArithOp::mul), x_plus_1);
}

TEST(FieldArith, PrimeDivision) {
  const Field& f = Field::get(5);
  EXPECT_EQ(fq_arith(Fq(f, 3), Fq(f, 4), ArithOp::div), Fq(f, 2));
}

TEST(FieldArith, Errors) {
  const Field& f = Field::get(5);
  EXPECT_THROW(fq_arith(Fq(f, 3), Fq(f, 0), ArithOp::div), DivisionByZero);
  EXPECT_THROW(Fq(f, 1) + Fq(Field::get(7), 1), FieldMismatch);
  EXPECT_THROW(Field::get(6), DomainError);
  EXPECT_THROW(Fq(f, 5), DomainError);
}

TEST(FieldArith, FieldLawsExhaustive) {
  for (long q : kSmallQ) {
    const Field& f = Field::get(q);
    for (int a = 0; a < q; ++a) {
      EXPECT_EQ(f.add(a, 0), a);
      EXPECT_EQ(f.mul(a, 1), a);
      EXPECT_EQ(f.add(a, f.neg(a)), 0);
      if (a) EXPECT_EQ(f.mul(a, f.inv(a)), 1);
      for (int b = 0; b < q; ++b) {
        EXPECT_EQ(f.add(a, b), f.add(b, a));
        EXPECT_EQ(f.mul(a, b), f.mul(b, a));
        for (int c = 0; c < q; ++c)
          EXPECT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
      }
    }
  }
}

TEST(FieldArith, PrimitiveElementHasFullOrder) {
  for (long q : {2L, 3L, 4L, 8L, 9L, 16L, 25L, 27L, 32L, 49L, 64L, 81L, 128L}) {
    const Field& f = Field::get(q);
    Elem g = f.primitive();
    Elem x = g;
    int order = 1;
    while (x != 1) {
      x = f.mul(x, g);
      ++order;
    }
    EXPECT_EQ(order, q - 1) << "q=" << q;
  }
}

TEST(FieldSpecTest, IrreducibilityCheck) {
  EXPECT_FALSE(is_irreducible_mod_p(std::vector<int>{1, 0, 1}, 2));  // (x+1)^2
  EXPECT_TRUE(is_irreducible_mod_p(std::vector<int>{1, 1, 1}, 2));
  EXPECT_TRUE(is_irreducible_mod_p(std::vector<int>{1, 0, 1}, 3));   // x^2+1 over F_3
  EXPECT_FALSE(is_irreducible_mod_p(std::vector<int>{1, 0, 1}, 5));  // 2^2 = -1
  for (long q : {4L, 8L, 9L, 16L, 25L, 27L, 32L, 49L, 64L}) {
    auto spec = default_field_spec(q);
    EXPECT_TRUE(is_irreducible_mod_p(spec.modulus, spec.p)) << q;
    EXPECT_EQ(spec.q(), q);
  }
  FieldSpec bad{2, 2, {1, 0, 1}};
  EXPECT_THROW(Field::get(bad), DomainError);
}

TEST(FieldSpecTest, UserModulusOverride) {
  FieldSpec alt{3, 2, {1, 0, 1}};  // x^2 + 1
  const Field& f = Field::get(alt);
  EXPECT_EQ(f.q(), 9);
  EXPECT_NE(&f, &Field::get(9));
  Fq x = Fq::from_coeffs(f, std::vector<int>{0, 1});
  EXPECT_EQ(x * x, Fq(f, 2));  // x^2 = -1
  EXPECT_EQ(&Field::get(alt), &f);
}

TEST(FieldSpecTest, JsonRoundTrip) {
  auto spec = default_field_spec(27);
  auto text = to_json(spec);
  EXPECT_EQ(field_spec_from_json(text), spec);
  EXPECT_THROW(field_spec_from_json("{\"p\": 2}"), ParseError);
  EXPECT_THROW(field_spec_from_json("{\"p\":2,\"s\":2,\"modulus\":[1,0,1]}"), DomainError);
}

TEST(Trace, Examples) {
  for (long q : kSmallQ) EXPECT_EQ(trace_map(Fq(Field::get(q), 0)), 0);
  const Field& f4 = Field::get(4);
  EXPECT_EQ(trace_map(Fq(f4, 1)), 0);
  Fq omega = Fq::from_coeffs(f4, std::vector<int>{0, 1});
  EXPECT_EQ(trace_map(omega), 1);
}

TEST(Trace, AdditiveLinearSurjective) {
  for (long q : kSmallQ) {
    const Field& f = Field::get(q);
    int p = f.p();
    std::vector<bool> hit(p, false);
    for (int x = 0; x < q; ++x) {
      hit[f.trace(x)] = true;
      EXPECT_EQ(f.trace(f.neg(x)), (p - f.trace(x)) % p);
      for (int c = 0; c < p; ++c)
        EXPECT_EQ(f.trace(f.mul(f.from_int(c), x)), c * f.trace(x) % p);
      for (int y = 0; y < q; ++y)
        EXPECT_EQ(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p) << "q=" << q;
    }
    for (int j = 0; j < p; ++j) EXPECT_TRUE(hit[j]) << "q=" << q;
  }
}

TEST(CharRoot, Examples) {
  EXPECT_EQ(char_root(2, 1), Cyclo(2, -1));
  EXPECT_EQ(char_root(3, 1) + char_root(3, 2), Cyclo(3, -1));
  EXPECT_EQ(char_root(5, 0), Cyclo(5, 1));
  EXPECT_THROW(char_root(3, 3), DomainError);
}

TEST(CharRoot, HomomorphismAndFullSum) {
  for (int p : {2, 3, 5, 7}) {
    Cyclo sum(p);
    for (int a = 0; a < p; ++a) {
      sum += char_root(p, a);
      for (int b = 0; b < p; ++b) EXPECT_EQ(char_root(p, a) * char_root(p, b), char_root(p, (a + b) % p));
      EXPECT_EQ(char_root(p, a).norm2(), Cyclo(p, 1));
      EXPECT_EQ(char_root(p, a).conj(), char_root(p, (p - a) % p));
    }
    EXPECT_TRUE(sum.is_zero());
  }
}

TEST(CycloTest, RationalityAndComplex) {
  Cyclo z = char_root(3, 1);
  EXPECT_FALSE(z.is_rational());
  EXPECT_THROW(z.to_rational(), NotRational);
  EXPECT_EQ((z + z.conj()).to_rational(), mpq_class(-1));
  auto c = z.to_complex();
  EXPECT_NEAR(c.real(), -0.5, 1e-12);
  EXPECT_NEAR(c.imag(), std::sqrt(3.0) / 2, 1e-12);
  EXPECT_THROW(Cyclo(3) + Cyclo(5), FieldMismatch);
}

TEST(SurdTest, ExactComparisons) {
  Surd a = Surd::power(2, -11, 4);  // 2^{-11/4}
  EXPECT_LT(a, Surd(mpq_class(1, 4)));
  EXPECT_GT(a, Surd(mpq_class(1, 8)));
  EXPECT_EQ(Surd(4, 2), Surd(2));
  EXPECT_TRUE(Surd(mpq_class(9, 4), 2).is_rational());
  EXPECT_EQ(Surd(mpq_class(9, 4), 2).to_rational(), mpq_class(3, 2));
  EXPECT_EQ(Surd(2, 2) * Surd(2, 2), Surd(2));
  EXPECT_THROW(Surd(2, 3).to_rational(), NotRational);
}
