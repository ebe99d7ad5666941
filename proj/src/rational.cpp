#include "relsched/rational.hpp"

#include <cctype>

#include "relsched/errors.hpp"

namespace relsched {

Rat rat(long num, long den) {
  if (den == 0) fail(ErrorCode::ParseError, "zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat rat(const Int& num, const Int& den) {
  if (den == 0) fail(ErrorCode::ParseError, "zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

Rat parse_rat(const std::string& text) {
  if (text.empty()) fail(ErrorCode::ParseError, "empty rational");
  std::string::size_type slash = text.find('/');
  auto check_int = [&](const std::string& part) {
    if (part.empty()) fail(ErrorCode::ParseError, "bad rational '" + text + "'");
    std::string::size_type start = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (start == part.size())
      fail(ErrorCode::ParseError, "bad rational '" + text + "'");
    for (auto i = start; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i])))
        fail(ErrorCode::ParseError, "bad rational '" + text + "'");
  };
  if (slash == std::string::npos) {
    check_int(text);
    return Rat(Int(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  check_int(num);
  check_int(den);
  Int d(den);
  if (d == 0) fail(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  Rat q(Int(num), d);
  q.canonicalize();
  return q;
}

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rat pow2(long k) {
  Int one = 1;
  if (k >= 0) return Rat(one << static_cast<unsigned long>(k));
  return rat(one, one << static_cast<unsigned long>(-k));
}

Rat rat_pow(const Rat& base, unsigned long e) {
  Rat result = 1;
  Rat b = base;
  while (e > 0) {
    if (e & 1UL) result *= b;
    b *= b;
    e >>= 1UL;
  }
  return result;
}

long ceil_log2(const Rat& q) {
  if (q <= 0) fail(ErrorCode::Internal, "ceil_log2 requires a positive value");
  const Int& num = q.get_num();
  const Int& den = q.get_den();
  long bits_num = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  long bits_den = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // q < 2^{bits_num - bits_den + 1}, so start just above and walk down.
  long a = bits_num - bits_den + 1;
  while (q <= pow2(a - 1)) --a;
  return a;
}

long floor_log2_strict(const Rat& q) { return ceil_log2(q) - 1; }

bool is_integer(const Rat& q) { return q.get_den() == 1; }

}  // namespace relsched
