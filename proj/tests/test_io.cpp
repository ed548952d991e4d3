#include <gtest/gtest.h>

#include <random>

#include "json.hpp"
#include "linex/extremal.hpp"
#include "linex/io.hpp"

using namespace linex;

TEST(Io, FamilyRoundTrip) {
  const auto fam = canonical_family(3, 2, 1, Side::row);
  const std::string text = format_family(fam);
  EXPECT_EQ(text.substr(0, 6), "2,3,3\n");
  EXPECT_EQ(parse_family(text), fam);
}

TEST(Io, FamilyWithContext) {
  const Field& f = Field::get(3);
  const std::string text =
      "# comment\n3,2,2\ncontext {\"cols\":[[[1,0],[1,0]]],\"rows\":[]}\n"
      "q=3;n=2;m=2;rows=1,0;0,1\nq=3;n=2;m=2;rows=1,2;0,0\n";
  const auto fam = parse_family(text);
  EXPECT_EQ(fam.size(), 2u);
  EXPECT_FALSE(fam.context().is_empty());
  EXPECT_EQ(parse_family(format_family(fam)), fam);
  EXPECT_EQ(fam.members()[0], Mat::identity(f, 2));
}

TEST(Io, FamilyErrors) {
  EXPECT_THROW(parse_family(""), ParseError);
  EXPECT_THROW(parse_family("2,2\n"), ParseError);
  EXPECT_THROW(parse_family("6,2,2\n"), ParseError);
  EXPECT_THROW(parse_family("2,2,2\nq=3;n=2;m=2;rows=1,0;0,1\n"), ParseError);
  EXPECT_THROW(parse_family("2,2,2\nq=2;n=2;m=2;rows=1,0;0,1\ncontext {}\n"), ParseError);
}

TEST(Io, FunctionRoundTrip) {
  std::mt19937_64 rng(1);
  std::vector<mpq_class> v(16);
  for (auto& x : v) x = mpq_class(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
  for (auto& x : v) x.canonicalize();
  const auto fn = DenseFunction::from_rational(Field::get(2), 2, 2, v);
  const std::string text = format_function(fn);
  EXPECT_EQ(parse_function(text), fn);
  EXPECT_EQ(parse_function("2,1,1\n1/2 -3\n"), DenseFunction::from_rational(Field::get(2), 1, 1, {mpq_class(1, 2), -3}));
  EXPECT_THROW(parse_function("2,1,1\n1\n"), ParseError);
  EXPECT_THROW(parse_function("2,1,1\n1 x\n"), ParseError);
  EXPECT_THROW(format_function(DenseFunction::character(Mat::identity(Field::get(3), 1), 1, 1)), NotRational);
}

TEST(Io, SpectrumRoundTrip) {
  for (long q : {2, 3, 4, 5}) {
    const Field& f = Field::get(q);
    std::mt19937_64 rng(q);
    const int n = 1, m = 2;
    std::vector<mpq_class> v(upow(q, n * m));
    for (auto& x : v) x = static_cast<long>(rng() % 3);
    const auto s = fast_transform(DenseFunction::from_rational(f, n, m, v));
    const std::string js = s.to_json();
    EXPECT_TRUE(nlohmann::json::parse(js).is_array());
    EXPECT_EQ(spectrum_from_json(f, n, m, js), s) << q;
  }
  EXPECT_THROW(spectrum_from_json(Field::get(2), 1, 1, "{"), ParseError);
  EXPECT_THROW(spectrum_from_json(Field::get(2), 1, 1, "[{\"X\":\"q=2;n=1;m=2;rows=0,1\",\"re\":[\"1\"]}]"),
               ParseError);
}

TEST(Io, Files) {
  const std::string path = ::testing::TempDir() + "linex_io_test.txt";
  write_text_file(path, "2,1,1\n0\n1\n");
  EXPECT_EQ(parse_function(read_text_file(path)).values().size(), 2u);
  EXPECT_THROW(read_text_file(path + ".missing"), ParseError);
}
