#include "besicover/rational.hpp"

namespace besicover {

Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
  r.canonicalize();
  if (r.get_den() <= 0) {
    throw std::invalid_argument("nonpositive denominator in rational: '" + s + "'");
  }
  return r;
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

Int rat_floor(const Rat& r) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

Int rat_ceil(const Rat& r) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
  return q;
}

namespace {
int64_t to_i64_checked(const Int& v, const char* what) {
  if (!v.fits_slong_p()) throw std::overflow_error(std::string(what) + ": value exceeds int64 range");
  return static_cast<int64_t>(v.get_si());
}
}  // namespace

int64_t rat_floor_i64(const Rat& r) { return to_i64_checked(rat_floor(r), "rat_floor_i64"); }
int64_t rat_ceil_i64(const Rat& r) { return to_i64_checked(rat_ceil(r), "rat_ceil_i64"); }

Int int_pow(const Int& base, unsigned long exp) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

Rat rat_pow(const Rat& base, unsigned long exp) {
  Rat out;
  mpz_pow_ui(out.get_num().get_mpz_t(), base.get_num().get_mpz_t(), exp);
  mpz_pow_ui(out.get_den().get_mpz_t(), base.get_den().get_mpz_t(), exp);
  // base was canonical, so num/den stay coprime after powering
  return out;
}

Int isqrt_floor(const Int& v) {
  if (v < 0) throw std::domain_error("isqrt_floor: negative argument");
  Int out;
  mpz_sqrt(out.get_mpz_t(), v.get_mpz_t());
  return out;
}

double rat_to_double(const Rat& r) { return r.get_d(); }

}  // namespace besicover
