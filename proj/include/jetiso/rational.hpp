#pragma once

/// \file
/// Exact rational scalar. Values whose numerator and denominator fit into a
/// signed 64-bit word are kept inline and combined through 128-bit
/// intermediates; anything larger is promoted to a GMP rational and demoted
/// again as soon as it fits.

#include <cctype>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace jetiso {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline bool fits_small(i128 v) { return v <= kSmallMax && v >= -static_cast<i128>(kSmallMax); }

inline u128 uabs(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

inline u128 gcd128(u128 a, u128 b)
{
	while (b != 0) {
		if ((a >> 64) == 0 && (b >> 64) == 0) {
			std::uint64_t x = static_cast<std::uint64_t>(a), y = static_cast<std::uint64_t>(b);
			while (y != 0) {
				std::uint64_t t = x % y;
				x = y;
				y = t;
			}
			return x;
		}
		u128 t = a % b;
		a = b;
		b = t;
	}
	return a;
}

inline mpz_class to_mpz(i128 v)
{
	const bool neg = v < 0;
	u128 u = uabs(v);
	mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
	mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
	mpz_class r = (hi << 64) + lo;
	return neg ? mpz_class(-r) : r;
}

} // namespace detail

class Rational
{
  public:
	Rational() = default;
	Rational(int v) : num_(v) {}
	Rational(long v) : num_(v) { check_small_range(); }
	Rational(long long v) : num_(v) { check_small_range(); }

	Rational(std::int64_t num, std::int64_t den)
	{
		if (den == 0)
			throw std::domain_error("rational: zero denominator");
		assign_reduced(num, den);
	}

	explicit Rational(const mpq_class &q) { assign_big(q); }

	/// Parses "p", "-p" or "p/q" with arbitrary-size integers.
	static Rational parse(std::string_view text)
	{
		std::string s(text);
		if (s.empty())
			throw std::invalid_argument("rational: empty string");
		for (char c : s)
			if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
				throw std::invalid_argument("rational: malformed '" + s + "'");
		if (s.front() == '+')
			s.erase(0, 1);
		mpq_class q;
		if (q.set_str(s, 10) != 0)
			throw std::invalid_argument("rational: malformed '" + std::string(text) + "'");
		if (q.get_den() == 0)
			throw std::domain_error("rational: zero denominator");
		q.canonicalize();
		return Rational(q);
	}

	bool is_small() const { return big_ == nullptr; }
	bool is_zero() const { return is_small() && num_ == 0; }
	bool is_one() const { return is_small() && num_ == 1 && den_ == 1; }
	bool is_integer() const { return is_small() ? den_ == 1 : big_->get_den() == 1; }

	int sign() const
	{
		if (is_small())
			return (num_ > 0) - (num_ < 0);
		return sgn(*big_);
	}

	mpq_class to_mpq() const
	{
		if (!is_small())
			return *big_;
		return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
	}

	std::string numerator_string() const { return is_small() ? std::to_string(num_) : big_->get_num().get_str(); }
	std::string denominator_string() const { return is_small() ? std::to_string(den_) : big_->get_den().get_str(); }

	/// "p/q", or "p" for integers.
	std::string to_string() const
	{
		if (is_integer())
			return numerator_string();
		return numerator_string() + "/" + denominator_string();
	}

	double to_double() const { return is_small() ? static_cast<double>(num_) / static_cast<double>(den_) : big_->get_d(); }

	Rational operator-() const
	{
		if (is_small()) {
			Rational r;
			r.num_ = -num_;
			r.den_ = den_;
			return r;
		}
		return Rational(mpq_class(-*big_));
	}

	Rational inverse() const
	{
		if (is_zero())
			throw std::domain_error("rational: inverse of zero");
		if (is_small()) {
			Rational r;
			r.num_ = num_ < 0 ? -den_ : den_;
			r.den_ = num_ < 0 ? -num_ : num_;
			return r;
		}
		return Rational(mpq_class(1 / *big_));
	}

	friend Rational operator+(const Rational &a, const Rational &b)
	{
		if (a.is_small() && b.is_small()) {
			if (a.num_ == 0)
				return b;
			if (b.num_ == 0)
				return a;
			using detail::i128;
			if (a.den_ == b.den_)
				return from_wide(static_cast<i128>(a.num_) + b.num_, a.den_);
			return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
			                 static_cast<i128>(a.den_) * b.den_);
		}
		return Rational(mpq_class(a.to_mpq() + b.to_mpq()));
	}

	friend Rational operator-(const Rational &a, const Rational &b)
	{
		if (a.is_small() && b.is_small()) {
			if (b.num_ == 0)
				return a;
			using detail::i128;
			if (a.den_ == b.den_)
				return from_wide(static_cast<i128>(a.num_) - b.num_, a.den_);
			return from_wide(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
			                 static_cast<i128>(a.den_) * b.den_);
		}
		return Rational(mpq_class(a.to_mpq() - b.to_mpq()));
	}

	friend Rational operator*(const Rational &a, const Rational &b)
	{
		if (a.is_small() && b.is_small()) {
			if (a.num_ == 0 || b.num_ == 0)
				return Rational();
			using detail::i128;
			if (a.den_ == 1 && b.den_ == 1)
				return from_wide(static_cast<i128>(a.num_) * b.num_, 1);
			return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
		}
		return Rational(mpq_class(a.to_mpq() * b.to_mpq()));
	}

	friend Rational operator/(const Rational &a, const Rational &b) { return a * b.inverse(); }

	Rational &operator+=(const Rational &o) { return *this = *this + o; }
	Rational &operator-=(const Rational &o) { return *this = *this - o; }
	Rational &operator*=(const Rational &o) { return *this = *this * o; }
	Rational &operator/=(const Rational &o) { return *this = *this / o; }

	/// this += a * b, the inner kernel of every elimination and contraction.
	void add_product(const Rational &a, const Rational &b)
	{
		if (a.is_zero() || b.is_zero())
			return;
		*this += a * b;
	}

	friend bool operator==(const Rational &a, const Rational &b)
	{
		if (a.is_small() != b.is_small())
			return false; // both canonical: small iff it fits
		if (a.is_small())
			return a.num_ == b.num_ && a.den_ == b.den_;
		return *a.big_ == *b.big_;
	}

	friend std::strong_ordering operator<=>(const Rational &a, const Rational &b)
	{
		if (a.is_small() && b.is_small()) {
			using detail::i128;
			i128 l = static_cast<i128>(a.num_) * b.den_, r = static_cast<i128>(b.num_) * a.den_;
			return l <=> r;
		}
		int c = cmp(a.to_mpq(), b.to_mpq());
		return c <=> 0;
	}

	friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

  private:
	void check_small_range()
	{
		if (num_ == std::numeric_limits<std::int64_t>::min())
			assign_big(mpq_class(mpz_class(static_cast<long>(num_))));
	}

	void assign_reduced(std::int64_t num, std::int64_t den)
	{
		detail::i128 n = num, d = den;
		*this = from_wide(n, d);
	}

	void assign_big(mpq_class q)
	{
		q.canonicalize();
		if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
		    q.get_num() != std::numeric_limits<long>::min()) {
			num_ = q.get_num().get_si();
			den_ = q.get_den().get_si();
			big_.reset();
		}
		else {
			num_ = 0;
			den_ = 1;
			big_ = std::make_shared<const mpq_class>(std::move(q));
		}
	}

	static Rational from_wide(detail::i128 n, detail::i128 d)
	{
		using namespace detail;
		if (d < 0) {
			n = -n;
			d = -d;
		}
		if (n == 0)
			return Rational();
		if (d != 1) {
			u128 g = gcd128(uabs(n), static_cast<u128>(d));
			if (g != 1) {
				n /= static_cast<i128>(g);
				d /= static_cast<i128>(g);
			}
		}
		Rational r;
		if (fits_small(n) && fits_small(d)) {
			r.num_ = static_cast<std::int64_t>(n);
			r.den_ = static_cast<std::int64_t>(d);
			return r;
		}
		r.big_ = std::make_shared<const mpq_class>(mpq_class(to_mpz(n), to_mpz(d)));
		return r;
	}

	std::int64_t num_ = 0;
	std::int64_t den_ = 1;
	std::shared_ptr<const mpq_class> big_;
};

inline Rational abs(const Rational &r) { return r.sign() < 0 ? -r : r; }

/// Exact binomial coefficient; zero outside 0 <= k <= n.
inline Rational binomial(long n, long k)
{
	if (k < 0 || n < 0 || k > n)
		return Rational();
	mpz_class r;
	mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
	return Rational(mpq_class(r));
}

inline Rational factorial(long n)
{
	if (n < 0)
		throw std::domain_error("factorial of negative number");
	mpz_class r;
	mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
	return Rational(mpq_class(r));
}

} // namespace jetiso
