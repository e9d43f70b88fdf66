#pragma once

/// \file
/// The free associative algebra on generators X_2, X_3, ... with the weighted
/// grading deg(X_i) = i, and the universal polynomials that express the
/// backwards parallel transport and the metric in normal coordinates through
/// the symmetrized curvature jet.

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace jetiso {

/// A monomial X_{i_1} X_{i_2} ... X_{i_r}; every letter is at least 2.
class Word
{
  public:
	Word() = default;
	Word(std::initializer_list<int> letters) : Word(std::vector<int>(letters)) {}
	explicit Word(std::vector<int> letters) : letters_(std::move(letters))
	{
		for (int l : letters_)
			if (l < 2)
				throw std::invalid_argument("Word: generator index must be >= 2, got " + std::to_string(l));
	}

	const std::vector<int> &letters() const { return letters_; }
	std::size_t length() const { return letters_.size(); }
	bool empty() const { return letters_.empty(); }

	int weighted_degree() const
	{
		int d = 0;
		for (int l : letters_)
			d += l;
		return d;
	}

	Word reversed() const { return Word(std::vector<int>(letters_.rbegin(), letters_.rend())); }

	friend Word operator*(const Word &a, const Word &b)
	{
		std::vector<int> l = a.letters_;
		l.insert(l.end(), b.letters_.begin(), b.letters_.end());
		Word w;
		w.letters_ = std::move(l);
		return w;
	}

	friend bool operator==(const Word &, const Word &) = default;

  private:
	std::vector<int> letters_;
};

inline int weighted_degree(const Word &w) { return w.weighted_degree(); }

/// Canonical term order: weighted degree, then word length, then lexicographic.
struct WordOrder
{
	bool operator()(const Word &a, const Word &b) const
	{
		int da = a.weighted_degree(), db = b.weighted_degree();
		if (da != db)
			return da < db;
		if (a.length() != b.length())
			return a.length() < b.length();
		return a.letters() < b.letters();
	}
};

class FreeElement
{
  public:
	using Terms = std::map<Word, Rational, WordOrder>;

	FreeElement() = default;
	FreeElement(const Rational &scalar) { add_term(Word{}, scalar); }

	static FreeElement unit() { return FreeElement(Rational(1)); }

	static FreeElement generator(int i)
	{
		FreeElement e;
		e.add_term(Word{i}, 1);
		return e;
	}

	static FreeElement monomial(const Word &w, const Rational &c = 1)
	{
		FreeElement e;
		e.add_term(w, c);
		return e;
	}

	const Terms &terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	Rational coefficient(const Word &w) const
	{
		auto it = terms_.find(w);
		return it == terms_.end() ? Rational() : it->second;
	}

	void add_term(const Word &w, const Rational &c)
	{
		if (c.is_zero())
			return;
		auto [it, inserted] = terms_.try_emplace(w, c);
		if (!inserted) {
			it->second += c;
			if (it->second.is_zero())
				terms_.erase(it);
		}
	}

	bool is_homogeneous(int degree) const
	{
		for (const auto &[w, c] : terms_)
			if (w.weighted_degree() != degree)
				return false;
		return true;
	}

	FreeElement &operator+=(const FreeElement &o)
	{
		for (const auto &[w, c] : o.terms_)
			add_term(w, c);
		return *this;
	}

	FreeElement &operator-=(const FreeElement &o)
	{
		for (const auto &[w, c] : o.terms_)
			add_term(w, -c);
		return *this;
	}

	FreeElement &operator*=(const Rational &s)
	{
		if (s.is_zero()) {
			terms_.clear();
			return *this;
		}
		for (auto &[w, c] : terms_)
			c *= s;
		return *this;
	}

	friend FreeElement operator+(FreeElement a, const FreeElement &b) { return a += b; }
	friend FreeElement operator-(FreeElement a, const FreeElement &b) { return a -= b; }
	friend FreeElement operator*(FreeElement a, const Rational &s) { return a *= s; }
	friend FreeElement operator*(const Rational &s, FreeElement a) { return a *= s; }

	/// Concatenation product, bilinearly extended.
	friend FreeElement operator*(const FreeElement &a, const FreeElement &b)
	{
		FreeElement p;
		for (const auto &[wa, ca] : a.terms_)
			for (const auto &[wb, cb] : b.terms_)
				p.add_term(wa * wb, ca * cb);
		return p;
	}

	friend bool operator==(const FreeElement &, const FreeElement &) = default;

	/// Renders e.g. "-4/3*X5 + 8/3*X2*X3 + 8/3*X3*X2"; the unit word prints as
	/// its coefficient alone and the zero element as "0".
	std::string to_text() const
	{
		if (terms_.empty())
			return "0";
		std::ostringstream os;
		bool first = true;
		for (const auto &[w, c] : terms_) {
			Rational shown = c;
			if (first) {
				first = false;
			}
			else if (c.sign() < 0) {
				os << " - ";
				shown = -c;
			}
			else {
				os << " + ";
			}
			os << shown;
			for (int l : w.letters())
				os << "*X" << l;
		}
		return os.str();
	}

  private:
	Terms terms_;
};

inline FreeElement mul(const FreeElement &a, const FreeElement &b) { return a * b; }

/// The anti-automorphism fixing every generator: reverses each word.
inline FreeElement star(const FreeElement &a)
{
	FreeElement r;
	for (const auto &[w, c] : a.terms())
		r.add_term(w.reversed(), c);
	return r;
}

/// i1 (i1+1) (i1+i2) (i1+i2+1) ... (i1+...+ir) (i1+...+ir+1).
inline Rational pi_product(const Word &w)
{
	if (w.empty())
		throw std::invalid_argument("pi_product: undefined for the empty word");
	Rational p = 1;
	long partial = 0;
	for (int l : w.letters()) {
		partial += l;
		p *= Rational(partial) * Rational(partial + 1);
	}
	return p;
}

/// Compositions of k into parts >= min_part, lexicographically ordered.
inline std::vector<Word> compositions(int k, int min_part = 2)
{
	std::vector<Word> out;
	std::vector<int> cur;
	std::function<void(int)> rec = [&](int remaining) {
		if (remaining == 0) {
			if (!cur.empty())
				out.emplace_back(cur);
			return;
		}
		for (int p = min_part; p <= remaining; ++p) {
			cur.push_back(p);
			rec(remaining - p);
			cur.pop_back();
		}
	};
	if (k > 0)
		rec(k);
	return out;
}

/// Q~_{-1}, Q~_0, ..., Q~_kmax from the defining recursion; entry j holds Q~_{j-1}.
inline std::vector<FreeElement> qtilde_table(int kmax)
{
	std::vector<FreeElement> table;
	table.emplace_back();               // Q~_{-1} = 0
	table.push_back(FreeElement::unit()); // Q~_0 = 1
	for (int k = 1; k <= kmax; ++k) {
		FreeElement sum;
		for (int l = 2; l <= k; ++l) {
			Rational c = binomial(k, l) * Rational((l - 1) * l);
			sum += c * (FreeElement::generator(l) * table[static_cast<std::size_t>(k - l + 1)]);
		}
		sum *= -Rational(1) / Rational(static_cast<long>(k) * (k + 1));
		table.push_back(std::move(sum));
	}
	return table;
}

inline FreeElement qtilde_recursive(int k)
{
	if (k < -1)
		throw std::invalid_argument("qtilde_recursive: k must be >= -1");
	return qtilde_table(k)[static_cast<std::size_t>(k + 1)];
}

/// Closed form: sum over words I of degree k of (k!/Pi_I) (X~_I)^*, with the
/// rescaled generators X~_j = -X_j/(j-2)!.
inline FreeElement qtilde_explicit(int k)
{
	if (k < 1)
		throw std::invalid_argument("qtilde_explicit: k must be >= 1");
	FreeElement out;
	Rational kfact = factorial(k);
	for (const Word &w : compositions(k)) {
		Rational c = kfact / pi_product(w);
		for (int l : w.letters())
			c *= -Rational(1) / factorial(l - 2);
		out.add_term(w.reversed(), c);
	}
	return out;
}

/// Q_k = sum_l C(k,l) (Q~_l)^* Q~_{k-l}.
inline FreeElement q_of(int k)
{
	if (k < 0)
		throw std::invalid_argument("q_of: k must be >= 0");
	auto table = qtilde_table(k);
	auto qt = [&](int j) -> const FreeElement & { return table[static_cast<std::size_t>(j + 1)]; };
	FreeElement out;
	for (int l = 0; l <= k; ++l)
		out += binomial(k, l) * (star(qt(l)) * qt(k - l));
	return out;
}

/// Coefficient of the single letter X_k in Q_k.
inline Rational leading_coeff(int k)
{
	if (k < 2)
		throw std::invalid_argument("leading_coeff: k must be >= 2");
	return q_of(k).coefficient(Word{k});
}

/// sum_{l<=order} Q_l / l!, the formal Taylor polynomial of the metric.
inline FreeElement taylor_formal(int order)
{
	FreeElement out;
	for (int l = 0; l <= order; ++l)
		out += q_of(l) * (Rational(1) / factorial(l));
	return out;
}

/// sum_{k<=order} Q~_k / k!, the formal expansion of the backwards parallel transport.
inline FreeElement transport_formal(int order)
{
	auto table = qtilde_table(order);
	FreeElement out;
	for (int k = 0; k <= order; ++k)
		out += table[static_cast<std::size_t>(k + 1)] * (Rational(1) / factorial(k));
	return out;
}

/// Operations of a unital associative target algebra.
template <class T>
struct AlgebraHooks
{
	std::function<T(const T &, const T &)> mul;
	std::function<T(const T &, const T &)> add;
	std::function<T(const T &, const Rational &)> scale;
	std::function<T()> unit;
};

/// The homomorphism determined by X_i -> assign[i].
template <class T>
T evaluate(const FreeElement &a, const std::map<int, T> &assign, const AlgebraHooks<T> &alg)
{
	for (const auto &[w, c] : a.terms())
		for (int l : w.letters())
			if (!assign.contains(l))
				throw std::invalid_argument("evaluate: no assignment for generator X" + std::to_string(l));
	T result = alg.scale(alg.unit(), Rational());
	for (const auto &[w, c] : a.terms()) {
		T prod = alg.unit();
		for (int l : w.letters())
			prod = alg.mul(prod, assign.at(l));
		result = alg.add(result, alg.scale(prod, c));
	}
	return result;
}

} // namespace jetiso
