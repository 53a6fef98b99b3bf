#include <doctest.h>

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "modpcp/errors.hpp"
#include "modpcp/io.hpp"
#include "modpcp/random.hpp"
#include "support.hpp"

using namespace modpcp;

TEST_CASE("matrix csv round trip is exact") {
  Matrix m = testing::random_matrix(7, 5, 11) * 1e-3;
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = -0.0;
  m(2, 2) = 1e-300;
  m(3, 3) = std::numeric_limits<double>::denorm_min();
  std::stringstream ss;
  io::write_matrix_csv(ss, m);
  const Matrix back = io::parse_matrix_csv(ss);
  CHECK(testing::bit_equal(m, back));
}

TEST_CASE("format_double keeps 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::parse_double(io::format_double(M_PI), 1) == M_PI);
}

TEST_CASE("csv parse errors carry the line number") {
  std::istringstream ragged("1,2\n3\n");
  try {
    io::parse_matrix_csv(ragged);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream junk("1,2\n3,abc\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(junk), ParseError);
  std::istringstream inf("1,inf\n");
  CHECK_THROWS_AS(io::parse_matrix_csv(inf), ParseError);
  std::istringstream empty("");
  CHECK(io::parse_matrix_csv(empty).size() == 0);
}

TEST_CASE("manifest parsing") {
  std::istringstream in("# comment\nkind = rextra_sweep\n\nvalues = 0, 10,20 # trailing\nx=1.5\n");
  const io::Manifest m = io::Manifest::parse(in);
  CHECK(m.get("kind") == "rextra_sweep");
  CHECK(m.get_ints("values") == std::vector<std::int64_t>{0, 10, 20});
  CHECK(m.get_double("x") == 1.5);
  CHECK(m.get_int_or("missing", 7) == 7);
  CHECK_THROWS_AS(m.get("missing"), ParameterError);

  std::istringstream dup("a = 1\na = 2\n");
  try {
    io::Manifest::parse(dup);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream noeq("a 1\n");
  CHECK_THROWS_AS(io::Manifest::parse(noeq), ParseError);

  io::Manifest w;
  w.set("alpha", 0.1);
  w.set("list", std::vector<std::int64_t>{1, 2});
  std::stringstream ss;
  w.write(ss);
  const io::Manifest r = io::Manifest::parse(ss);
  CHECK(r.get_double("alpha") == 0.1);
  CHECK(r.get_ints("list") == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("rng streams are reproducible and seeds differ") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);

  std::set<std::uint64_t> seeds;
  for (std::uint64_t p = 0; p < 20; ++p) {
    for (std::uint64_t t = 0; t < 20; ++t) seeds.insert(mix_seed(7, p, t));
  }
  CHECK(seeds.size() == 400);
}

TEST_CASE("rng transforms have the right moments") {
  Rng rng(5);
  const int n = 200000;
  double s = 0, s2 = 0, u = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    u += rng.uniform01();
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
  CHECK(std::abs(u / n - 0.5) < 0.005);

  const auto sample = rng.sample_without_replacement(1000, 1000);
  CHECK(std::set<std::uint64_t>(sample.begin(), sample.end()).size() == 1000);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}
