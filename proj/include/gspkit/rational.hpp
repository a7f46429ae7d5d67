#ifndef GSPKIT_RATIONAL_HPP
#define GSPKIT_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace gspkit {

using Q = mpq_class;
using i64 = std::int64_t;

/** \brief Sentinel time returned when no finite time reaches a cost level. */
inline constexpr i64 kNever = std::numeric_limits<i64>::max();

/** \brief Exact nonnegative rational extended with an absorbing infinity. */
struct Cost {
	bool inf = false;
	Q v = 0;

	Cost() = default;
	Cost(const Q& q) : inf(false), v(q) {}
	Cost(long x) : inf(false), v(x) {}
	Cost(int x) : inf(false), v(x) {}

	static Cost infinity()
	{
		Cost c;
		c.inf = true;
		return c;
	}
	bool finite() const { return !inf; }
	bool is_zero() const { return !inf && v == 0; }
};

inline Cost operator+(const Cost& a, const Cost& b)
{
	if (a.inf || b.inf)
		return Cost::infinity();
	return Cost(Q(a.v + b.v));
}

inline Cost& operator+=(Cost& a, const Cost& b)
{
	a = a + b;
	return a;
}

/** \brief Difference of two costs; requires b finite and b <= a. */
inline Cost operator-(const Cost& a, const Cost& b)
{
	if (b.inf)
		throw std::domain_error("subtracting infinity");
	if (a.inf)
		return Cost::infinity();
	return Cost(Q(a.v - b.v));
}

/** \brief Scales a cost by a nonnegative rational; 0 * inf is 0. */
inline Cost operator*(const Q& k, const Cost& a)
{
	if (a.inf)
		return k == 0 ? Cost(0) : Cost::infinity();
	return Cost(Q(k * a.v));
}

inline bool operator==(const Cost& a, const Cost& b)
{
	if (a.inf || b.inf)
		return a.inf == b.inf;
	return a.v == b.v;
}
inline bool operator!=(const Cost& a, const Cost& b) { return !(a == b); }
inline bool operator<(const Cost& a, const Cost& b)
{
	if (a.inf)
		return false;
	if (b.inf)
		return true;
	return a.v < b.v;
}
inline bool operator>(const Cost& a, const Cost& b) { return b < a; }
inline bool operator<=(const Cost& a, const Cost& b) { return !(b < a); }
inline bool operator>=(const Cost& a, const Cost& b) { return !(a < b); }

/** \brief Renders q as an integer or "num/den". */
inline std::string q_str(const Q& q)
{
	Q c = q;
	c.canonicalize();
	if (c.get_den() == 1)
		return c.get_num().get_str();
	return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string cost_str(const Cost& c) { return c.inf ? std::string("inf") : q_str(c.v); }

/** \brief Parses "7", "-3", "5/2" into an exact rational. */
inline Q parse_q(const std::string& s)
{
	if (s.empty())
		throw std::invalid_argument("empty rational");
	Q q;
	if (q.set_str(s, 10) != 0)
		throw std::invalid_argument("malformed rational: " + s);
	if (q.get_den() == 0)
		throw std::invalid_argument("zero denominator: " + s);
	q.canonicalize();
	return q;
}

/** \brief Parses a rational or the string "inf". */
inline Cost parse_cost(const std::string& s)
{
	if (s == "inf")
		return Cost::infinity();
	return Cost(parse_q(s));
}

inline i64 to_i64(const mpz_class& z)
{
	if (!z.fits_slong_p())
		throw std::overflow_error("integer out of range");
	return z.get_si();
}

/** \brief Largest integer <= q. */
inline i64 floor_q(const Q& q)
{
	mpz_class r;
	mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return to_i64(r);
}

/** \brief Smallest integer >= q. */
inline i64 ceil_q(const Q& q)
{
	mpz_class r;
	mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return to_i64(r);
}

/** \brief Exact power base^e for integer e (negative allowed, base != 0). */
inline Q pow_q(const Q& base, i64 e)
{
	Q r = 1;
	Q b = base;
	bool neg = e < 0;
	unsigned long n = static_cast<unsigned long>(neg ? -e : e);
	while (n) {
		if (n & 1UL)
			r *= b;
		b *= b;
		n >>= 1;
	}
	if (neg)
		r = 1 / r;
	r.canonicalize();
	return r;
}

/** \brief The unique e with base^e <= q < base^(e+1); requires q > 0 and base > 1. */
inline i64 bucket_exp(const Q& q, const Q& base)
{
	if (q <= 0)
		throw std::domain_error("bucket_exp of nonpositive value");
	if (base <= 1)
		throw std::domain_error("bucket_exp base must exceed 1");
	i64 e = 0;
	Q lo = 1;
	while (lo > q) {
		lo /= base;
		--e;
	}
	Q hi = lo * base;
	while (hi <= q) {
		lo = hi;
		hi *= base;
		++e;
	}
	return e;
}

/** \brief floor(log2(x)) for x >= 1. */
inline int floor_log2(i64 x)
{
	if (x < 1)
		throw std::domain_error("floor_log2 of nonpositive value");
	int k = 0;
	while ((x >> 1) > 0) {
		x >>= 1;
		++k;
	}
	return k;
}

/** \brief Smallest power of two >= x (x >= 1). */
inline i64 next_pow2(i64 x)
{
	i64 t = 1;
	while (t < x)
		t <<= 1;
	return t;
}

/** \brief True iff q is 1/k for a positive integer k. */
inline bool is_unit_fraction(const Q& q) { return q > 0 && q <= 1 && q.get_num() == 1; }

/** \brief True iff q is 2^-k for some k >= 0. */
inline bool is_dyadic_unit(const Q& q)
{
	if (!is_unit_fraction(q))
		return false;
	mpz_class d = q.get_den();
	return mpz_popcount(d.get_mpz_t()) == 1;
}

} // namespace gspkit

#endif // GSPKIT_RATIONAL_HPP
