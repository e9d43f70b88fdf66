#pragma once

/// \file
/// The algebra of End(V)-valued polynomials on V with pointwise composition,
/// and the identification of Sym^k V* (x) Sym^2 V* with its homogeneous part
/// of degree k through the inner product.

#include <map>
#include <stdexcept>
#include <utility>

#include "freealg.hpp"
#include "tensor.hpp"

namespace jetiso {

/// Polynomial xi -> End(V). Monomials are keyed by sorted index tuples
/// (xi_0^2 xi_1 is {0,0,1}); matrices act on column vectors.
class PolyEnd
{
  public:
	using Terms = std::map<Index, RatMatrix>;

	PolyEnd() = default;
	explicit PolyEnd(Space space) : space_(std::move(space)) {}

	static PolyEnd identity(const Space &space)
	{
		PolyEnd p(space);
		p.terms_[{}] = RatMatrix::identity(static_cast<std::size_t>(space.n()));
		return p;
	}

	const Space &space() const { return space_; }
	const Terms &terms() const { return terms_; }

	/// Largest monomial degree present, -1 for the zero polynomial.
	int degree() const
	{
		int d = -1;
		for (const auto &[m, a] : terms_)
			d = std::max(d, static_cast<int>(m.size()));
		return d;
	}

	bool is_homogeneous(int d) const
	{
		for (const auto &[m, a] : terms_)
			if (static_cast<int>(m.size()) != d)
				return false;
		return true;
	}

	bool is_zero() const { return terms_.empty(); }

	void add_term(Index monomial, const RatMatrix &a)
	{
		std::sort(monomial.begin(), monomial.end());
		if (a.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(std::move(monomial), a);
		if (!inserted) {
			it->second += a;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	RatMatrix coefficient(Index monomial) const
	{
		std::sort(monomial.begin(), monomial.end());
		auto it = terms_.find(monomial);
		if (it == terms_.end())
			return RatMatrix(static_cast<std::size_t>(space_.n()), static_cast<std::size_t>(space_.n()));
		return it->second;
	}

	/// The degree-d homogeneous part.
	PolyEnd part(int d) const
	{
		PolyEnd p(space_);
		for (const auto &[m, a] : terms_)
			if (static_cast<int>(m.size()) == d)
				p.terms_.emplace(m, a);
		return p;
	}

	RatMatrix operator()(const RatVector &xi) const
	{
		const auto n = static_cast<std::size_t>(space_.n());
		RatMatrix out(n, n);
		for (const auto &[m, a] : terms_) {
			Rational w = 1;
			for (int i : m)
				w *= xi[static_cast<std::size_t>(i)];
			if (!w.is_zero())
				out += a * w;
		}
		return out;
	}

	PolyEnd &operator+=(const PolyEnd &o)
	{
		for (const auto &[m, a] : o.terms_)
			add_term(m, a);
		return *this;
	}

	PolyEnd &operator*=(const Rational &s)
	{
		if (s.is_zero()) {
			terms_.clear();
			return *this;
		}
		for (auto &[m, a] : terms_)
			a *= s;
		return *this;
	}

	friend PolyEnd operator+(PolyEnd a, const PolyEnd &b) { return a += b; }
	friend PolyEnd operator*(PolyEnd a, const Rational &s) { return a *= s; }
	friend bool operator==(const PolyEnd &a, const PolyEnd &b) { return a.terms_ == b.terms_; }

  private:
	Space space_;
	Terms terms_;
};

/// Pointwise composition (a o b)(xi) = a(xi) b(xi).
inline PolyEnd poly_end_compose(const PolyEnd &a, const PolyEnd &b)
{
	if (!(a.space() == b.space()))
		throw std::invalid_argument("poly_end_compose: operands live on different spaces");
	PolyEnd out(a.space());
	for (const auto &[ma, xa] : a.terms())
		for (const auto &[mb, xb] : b.terms()) {
			Index m = ma;
			m.insert(m.end(), mb.begin(), mb.end());
			out.add_term(std::move(m), xa * xb);
		}
	return out;
}

/// Raises the second pair index: <E(xi) x, y> = h(xi,...,xi; x, y).
inline PolyEnd pair_to_end(const SymPairTensor &h)
{
	const int n = h.n();
	PolyEnd out(h.space());
	const auto &ms = h.sym_space();
	for (std::size_t r = 0; r < ms.size(); ++r) {
		Rational mult = multinomial(ms[r]);
		RatMatrix e(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
		for (int a = 0; a < n; ++a)
			for (int b = 0; b < n; ++b)
				e(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = mult * Rational(h.space().eps(a)) * h.at(ms[r], a, b);
		out.add_term(ms[r], e);
	}
	return out;
}

/// Inverse of pair_to_end on homogeneous, self-adjoint polynomials of degree k.
inline SymPairTensor end_to_pair(const PolyEnd &e, int k)
{
	if (!e.is_homogeneous(k))
		throw std::invalid_argument("end_to_pair: polynomial is not homogeneous of degree " + std::to_string(k));
	const Space &space = e.space();
	const int n = space.n();
	SymPairTensor h(space, k);
	for (const auto &[m, a] : e.terms()) {
		Rational inv = multinomial(m).inverse();
		for (int i = 0; i < n; ++i)
			for (int j = 0; j < n; ++j) {
				Rational lowered = Rational(space.eps(i)) * a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
				Rational mirror = Rational(space.eps(j)) * a(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
				if (lowered != mirror)
					throw std::invalid_argument("end_to_pair: endomorphism is not self-adjoint");
				if (i <= j)
					h.at(m, i, j) = lowered * inv;
			}
	}
	return h;
}

/// Hooks for evaluating free-algebra elements in End(V)-valued polynomials.
inline AlgebraHooks<PolyEnd> poly_end_algebra(const Space &space)
{
	AlgebraHooks<PolyEnd> alg;
	alg.mul = [](const PolyEnd &a, const PolyEnd &b) { return poly_end_compose(a, b); };
	alg.add = [](const PolyEnd &a, const PolyEnd &b) { return a + b; };
	alg.scale = [](const PolyEnd &a, const Rational &s) { return a * s; };
	alg.unit = [space]() { return PolyEnd::identity(space); };
	return alg;
}

} // namespace jetiso
