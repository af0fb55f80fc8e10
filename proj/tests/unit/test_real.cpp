#include <doctest.h>

#include <sstream>

#include "dsr/error.hpp"
#include "dsr/real.hpp"

using namespace dsr;

TEST_CASE("precision scope restores the thread precision") {
  const int before = precision_bits();
  {
    PrecisionScope s(512);
    CHECK(precision_bits() == 512);
    CHECK(Real(1).bits() == 512);
    {
      PrecisionScope t(64);
      CHECK(Real(1).bits() == 64);
    }
    CHECK(precision_bits() == 512);
  }
  CHECK(precision_bits() == before);
}

TEST_CASE("decimal text round-trips at the working precision") {
  for (int bits : {53, 128, 256, 1024}) {
    PrecisionScope s(bits);
    const Real x = Real(1) / Real(3) + pi() * Real("1e-40");
    CHECK(Real(x.str()) == x);
    const Real y = -exp(Real(-300));
    CHECK(Real(y.str()) == y);
  }
}

TEST_CASE("parser accepts special values and rejects junk") {
  CHECK(!Real("inf").is_finite());
  CHECK(Real("-2.5e-3").to_double() == doctest::Approx(-2.5e-3));
  CHECK_THROWS(Real("1.2.3"));
  CHECK_THROWS(Real(""));
}

TEST_CASE("elementary functions agree with known digits") {
  PrecisionScope s(256);
  const Real pi_ref("3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803");
  CHECK(abs(pi() - pi_ref) < ldexp(Real(1), -250));
  CHECK(abs(exp(log(Real(2))) - 2) < ldexp(Real(1), -250));
  CHECK(abs(sin(pi() / 6) - Real(0.5)) < ldexp(Real(1), -250));
  CHECK(abs(pow(Real(2), Real(0.5)) - sqrt(Real(2))) < ldexp(Real(1), -250));
  CHECK(abs(expm1(Real("1e-50")) - Real("1e-50")) < Real("1e-99"));
}

TEST_CASE("copies keep their precision; rounded narrows") {
  Real a;
  {
    PrecisionScope s(512);
    a = Real(1) / Real(7);
  }
  CHECK(a.bits() == 512);
  const Real b = a.rounded(53);
  CHECK(b.bits() == 53);
  CHECK(b.to_double() == 1.0 / 7.0);
}

TEST_CASE("roundtrip digits") {
  CHECK(roundtrip_digits(53) == 17);
  CHECK(roundtrip_digits(24) == 9);
}

TEST_CASE("comparison is a partial order with nan unordered") {
  const Real nan = Real(0) / Real(0);
  CHECK(nan.is_nan());
  CHECK(!(nan < Real(1)));
  CHECK(!(nan >= Real(1)));
  CHECK(Real(1) < Real(2));
  CHECK(max(Real(1), Real(3)) == Real(3));
}
