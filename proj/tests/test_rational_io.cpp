#include <nlqk/errors.hpp>
#include <nlqk/io.hpp>
#include <nlqk/rational.hpp>

#include <gtest/gtest.h>

#include <clocale>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace nlqk;

namespace {
std::filesystem::path scratch(const std::string& name) {
  const char* base = std::getenv("NLQK_TEST_TMP");
  std::filesystem::path dir = base ? base : std::filesystem::temp_directory_path() / "nlqk_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}
}  // namespace

TEST(Rational, ExactRationalOfDyadicValues) {
  EXPECT_EQ(exact_rational(0.5), Rational(1, 2));
  EXPECT_EQ(exact_rational(-3.0), Rational(-3));
  EXPECT_EQ(exact_rational(0.0), Rational(0));
  // 0.1 is not 1/10 in binary; its exact value has denominator 2^55.
  const Rational tenth = exact_rational(0.1);
  EXPECT_NE(tenth, Rational(1, 10));
  EXPECT_EQ(denominator(tenth), BigInt(1) << 55);
  EXPECT_EQ(to_double(tenth), 0.1);
}

TEST(Rational, ExactRationalRoundTripsExtremeDoubles) {
  for (double v : {std::numeric_limits<double>::max(), std::numeric_limits<double>::denorm_min(),
                   1e-300, 123456.789, -2.5e17}) {
    EXPECT_EQ(to_double(exact_rational(v)), v) << v;
  }
  EXPECT_THROW(exact_rational(std::nan("")), InvalidArgument);
  EXPECT_THROW(exact_rational(INFINITY), InvalidArgument);
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(parse_rational("7"), Rational(7));
  EXPECT_EQ(parse_rational("-3/12"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("0.05"), Rational(1, 20));
  EXPECT_EQ(parse_rational("010"), Rational(10));  // not octal
  EXPECT_EQ(parse_rational("-0.125"), Rational(-1, 8));
  EXPECT_THROW(parse_rational("1/0"), InvalidArgument);
  EXPECT_THROW(parse_rational("abc"), InvalidArgument);
  EXPECT_THROW(parse_rational(""), InvalidArgument);
}

TEST(Rational, StringAndFactorial) {
  EXPECT_EQ(to_string(Rational(3, 6)), "1/2");
  EXPECT_EQ(to_string(Rational(4)), "4");
  EXPECT_EQ(factorial(0), Rational(1));
  EXPECT_EQ(factorial(10), Rational(3628800));
  EXPECT_EQ(to_int64(BigInt(-42)), -42);
  EXPECT_THROW(to_int64(BigInt(1) << 70), InvalidArgument);
}

TEST(Io, FormatDoubleRoundTripsAndIgnoresLocale) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(io::format_double(v)), v);
  }
  std::setlocale(LC_NUMERIC, "de_DE.UTF-8");  // may be unavailable; harmless then
  EXPECT_EQ(io::format_double(0.5), "0.5");
  std::setlocale(LC_NUMERIC, "C");
}

TEST(Io, CsvReadSkipsHeaderAndValidates) {
  const auto path = scratch("io_read.csv");
  {
    std::ofstream f(path);
    f << "x,value\n1,2\n3.5,-4e-3\n";
  }
  const auto rows = io::read_numeric_csv(path, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[1][0], 3.5);
  EXPECT_DOUBLE_EQ(rows[1][1], -4e-3);
  EXPECT_THROW(io::read_numeric_csv(path, 3), InvalidArgument);
  {
    std::ofstream f(path);
    f << "x,value\n1,2\n3,oops\n";
  }
  EXPECT_THROW(io::read_numeric_csv(path, 2), InvalidArgument);
  EXPECT_THROW(io::read_numeric_csv(scratch("missing.csv"), 2), InvalidArgument);
}

TEST(Io, AtomicWriteLeavesNoTemporary) {
  const auto path = scratch("atomic.txt");
  io::write_file_atomic(path, "hello\n");
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "hello");
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(Io, XyCsvLayout) {
  const std::vector<double> x{0.0, 0.5};
  const std::vector<double> v{1.0, 0.25};
  EXPECT_EQ(io::xy_csv(x, v), "x,value\n0,1\n0.5,0.25\n");
}
