#pragma once

/// \file
/// Truncated multivariate power series in xi_0..xi_{n-1} with exact rational
/// coefficients, and tensor-shaped arrays of them.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "multiset.hpp"
#include "rational.hpp"

namespace jetiso {

/// Monomials of total degree <= max_degree in n variables, graded then
/// reverse-lexicographic in the exponent vector, with product and derivative
/// tables.
class MonomialIndex
{
  public:
	MonomialIndex(int n, int max_degree) : n_(n), max_degree_(max_degree)
	{
		if (n < 1 || max_degree < 0)
			throw std::invalid_argument("MonomialIndex: need n >= 1 and max_degree >= 0");
		std::vector<int> e(static_cast<std::size_t>(n), 0);
		for (int d = 0; d <= max_degree; ++d) {
			prefix_.push_back(exps_.size());
			enumerate(e, 0, d);
		}
		prefix_.push_back(exps_.size());
		for (std::size_t i = 0; i < exps_.size(); ++i)
			lookup_.emplace(exps_[i], i);
		degree_.resize(exps_.size());
		for (std::size_t i = 0; i < exps_.size(); ++i) {
			int d = 0;
			for (int v : exps_[i])
				d += v;
			degree_[i] = d;
		}
		const std::size_t m = exps_.size();
		product_.assign(m * m, kNone);
		for (std::size_t i = 0; i < m; ++i)
			for (std::size_t j = 0; j < count(max_degree_ - degree_[i]); ++j) {
				std::vector<int> s = exps_[i];
				for (std::size_t v = 0; v < s.size(); ++v)
					s[v] += exps_[j][v];
				product_[i * m + j] = lookup_.at(s);
			}
		deriv_.assign(static_cast<std::size_t>(n) * m, kNone);
		for (int v = 0; v < n; ++v)
			for (std::size_t i = 0; i < m; ++i)
				if (exps_[i][static_cast<std::size_t>(v)] > 0) {
					std::vector<int> s = exps_[i];
					--s[static_cast<std::size_t>(v)];
					deriv_[static_cast<std::size_t>(v) * m + i] = lookup_.at(s);
				}
	}

	static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

	int n() const { return n_; }
	int max_degree() const { return max_degree_; }
	std::size_t size() const { return exps_.size(); }

	/// Number of monomials of degree <= d.
	std::size_t count(int d) const
	{
		if (d < 0)
			return 0;
		return prefix_[static_cast<std::size_t>(std::min(d, max_degree_) + 1)];
	}

	const std::vector<int> &exponents(std::size_t i) const { return exps_[i]; }
	int degree(std::size_t i) const { return degree_[i]; }

	std::size_t index(const std::vector<int> &exponents) const
	{
		auto it = lookup_.find(exponents);
		if (it == lookup_.end())
			throw std::out_of_range("MonomialIndex: monomial out of range");
		return it->second;
	}

	/// Index of x^{e_i + e_j}; kNone if its degree exceeds max_degree.
	std::size_t product(std::size_t i, std::size_t j) const { return product_[i * exps_.size() + j]; }

	/// Index of x^{e_i - unit_v}; kNone if the exponent of v is zero.
	std::size_t derivative(int v, std::size_t i) const { return deriv_[static_cast<std::size_t>(v) * exps_.size() + i]; }

	/// Shared instance per (n, max_degree).
	static const MonomialIndex &get(int n, int max_degree)
	{
		static std::mutex mu;
		static std::map<std::pair<int, int>, std::unique_ptr<MonomialIndex>> cache;
		std::lock_guard lock(mu);
		auto &slot = cache[{n, max_degree}];
		if (!slot)
			slot = std::make_unique<MonomialIndex>(n, max_degree);
		return *slot;
	}

  private:
	void enumerate(std::vector<int> &e, int var, int remaining)
	{
		if (var == n_ - 1) {
			e[static_cast<std::size_t>(var)] = remaining;
			exps_.push_back(e);
			return;
		}
		for (int a = remaining; a >= 0; --a) {
			e[static_cast<std::size_t>(var)] = a;
			enumerate(e, var + 1, remaining - a);
		}
		e[static_cast<std::size_t>(var)] = 0;
	}

	int n_;
	int max_degree_;
	std::vector<std::vector<int>> exps_;
	std::vector<std::size_t> prefix_;
	std::vector<int> degree_;
	std::map<std::vector<int>, std::size_t> lookup_;
	std::vector<std::size_t> product_;
	std::vector<std::size_t> deriv_;
};

/// Power series truncated above total degree `order`.
class Series
{
  public:
	Series() = default;
	Series(int n, int order) : index_(&MonomialIndex::get(n, order)), order_(order), c_(index_->size()) {}

	static Series constant(int n, int order, const Rational &c)
	{
		Series s(n, order);
		s.c_[0] = c;
		return s;
	}

	/// The coordinate function xi_v.
	static Series variable(int n, int order, int v)
	{
		Series s(n, order);
		if (order >= 1) {
			std::vector<int> e(static_cast<std::size_t>(n), 0);
			e[static_cast<std::size_t>(v)] = 1;
			s.c_[s.index_->index(e)] = 1;
		}
		return s;
	}

	int n() const { return index_->n(); }
	int order() const { return order_; }
	const MonomialIndex &index() const { return *index_; }
	const std::vector<Rational> &coefficients() const { return c_; }
	Rational &operator[](std::size_t i) { return c_[i]; }
	const Rational &operator[](std::size_t i) const { return c_[i]; }

	Rational coefficient(const std::vector<int> &exponents) const
	{
		int d = 0;
		for (int e : exponents)
			d += e;
		if (d > order_)
			return {};
		return c_[index_->index(exponents)];
	}

	bool is_zero() const
	{
		return std::all_of(c_.begin(), c_.end(), [](const Rational &x) { return x.is_zero(); });
	}

	/// True iff every coefficient of degree <= d vanishes.
	bool vanishes_through(int d) const
	{
		const std::size_t m = index_->count(std::min(d, order_));
		for (std::size_t i = 0; i < m; ++i)
			if (!c_[i].is_zero())
				return false;
		return true;
	}

	/// The same series truncated (or zero-extended) to a new order.
	Series reordered(int order) const
	{
		Series s(n(), order);
		const std::size_t m = std::min(s.c_.size(), c_.size());
		std::copy(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(m), s.c_.begin());
		return s;
	}

	/// Homogeneous part of degree d.
	Series part(int d) const
	{
		Series s(n(), order_);
		for (std::size_t i = index_->count(d - 1); i < index_->count(d); ++i)
			s.c_[i] = c_[i];
		return s;
	}

	/// Multiplies the degree-d part by d.
	Series euler() const
	{
		Series s = *this;
		for (std::size_t i = 0; i < c_.size(); ++i)
			s.c_[i] *= Rational(index_->degree(i));
		return s;
	}

	/// d/dxi_v, truncated at order-1.
	Series derivative(int v) const
	{
		Series s(n(), std::max(order_ - 1, 0));
		for (std::size_t i = 0; i < c_.size(); ++i) {
			if (c_[i].is_zero())
				continue;
			std::size_t j = index_->derivative(v, i);
			if (j == MonomialIndex::kNone)
				continue;
			s.c_[j] += c_[i] * Rational(index_->exponents(i)[static_cast<std::size_t>(v)]);
		}
		return s;
	}

	Series &operator+=(const Series &o)
	{
		check(o);
		for (std::size_t i = 0; i < c_.size(); ++i)
			c_[i] += o.c_[i];
		return *this;
	}
	Series &operator-=(const Series &o)
	{
		check(o);
		for (std::size_t i = 0; i < c_.size(); ++i)
			c_[i] -= o.c_[i];
		return *this;
	}
	Series &operator*=(const Rational &s)
	{
		for (auto &x : c_)
			x *= s;
		return *this;
	}

	/// acc += a * b, truncated at acc's order.
	static void add_product(Series &acc, const Series &a, const Series &b)
	{
		if (a.n() != b.n() || a.n() != acc.n())
			throw std::invalid_argument("Series: dimension mismatch");
		// Graded enumerations are nested, so indices agree across truncation orders.
		const MonomialIndex &idx = *acc.index_;
		const std::size_t ma = a.index_->count(acc.order_);
		for (std::size_t i = 0; i < ma; ++i) {
			const Rational &x = a.c_[i];
			if (x.is_zero())
				continue;
			const std::size_t mb = b.index_->count(acc.order_ - a.index_->degree(i));
			for (std::size_t j = 0; j < mb; ++j) {
				const Rational &y = b.c_[j];
				if (y.is_zero())
					continue;
				acc.c_[idx.product(i, j)].add_product(x, y);
			}
		}
	}

	friend Series operator+(Series a, const Series &b) { return a += b; }
	friend Series operator-(Series a, const Series &b) { return a -= b; }
	friend Series operator*(Series a, const Rational &s) { return a *= s; }
	friend Series operator*(const Series &a, const Series &b)
	{
		Series out(a.n(), std::min(a.order_, b.order_));
		add_product(out, a, b);
		return out;
	}
	friend bool operator==(const Series &a, const Series &b) { return a.order_ == b.order_ && a.c_ == b.c_ && a.n() == b.n(); }

  private:
	void check(const Series &o) const
	{
		if (o.n() != n() || o.order_ != order_)
			throw std::invalid_argument("Series: operands differ in dimension or truncation order");
	}

	const MonomialIndex *index_ = nullptr;
	int order_ = 0;
	std::vector<Rational> c_;
};

/// Dense array of series over {0..n-1}^rank, row-major.
class SeriesTensor
{
  public:
	SeriesTensor() = default;
	SeriesTensor(int n, int rank, int order) : n_(n), rank_(rank), order_(order), comps_(ipow(static_cast<std::size_t>(n), rank), Series(n, order)) {}

	int n() const { return n_; }
	int rank() const { return rank_; }
	int order() const { return order_; }
	std::size_t size() const { return comps_.size(); }
	DenseShape shape() const { return DenseShape(n_, rank_); }

	Series &operator[](std::size_t off) { return comps_[off]; }
	const Series &operator[](std::size_t off) const { return comps_[off]; }
	Series &at(const Index &idx) { return comps_[shape().offset(idx)]; }
	const Series &at(const Index &idx) const { return comps_[shape().offset(idx)]; }

	bool is_zero() const
	{
		return std::all_of(comps_.begin(), comps_.end(), [](const Series &s) { return s.is_zero(); });
	}

	bool vanishes_through(int d) const
	{
		return std::all_of(comps_.begin(), comps_.end(), [d](const Series &s) { return s.vanishes_through(d); });
	}

	SeriesTensor reordered(int order) const
	{
		SeriesTensor t(n_, rank_, order);
		for (std::size_t i = 0; i < comps_.size(); ++i)
			t.comps_[i] = comps_[i].reordered(order);
		return t;
	}

	SeriesTensor &operator+=(const SeriesTensor &o)
	{
		for (std::size_t i = 0; i < comps_.size(); ++i)
			comps_[i] += o.comps_[i];
		return *this;
	}
	SeriesTensor &operator-=(const SeriesTensor &o)
	{
		for (std::size_t i = 0; i < comps_.size(); ++i)
			comps_[i] -= o.comps_[i];
		return *this;
	}
	SeriesTensor &operator*=(const Rational &s)
	{
		for (auto &c : comps_)
			c *= s;
		return *this;
	}
	friend bool operator==(const SeriesTensor &a, const SeriesTensor &b)
	{
		return a.n_ == b.n_ && a.rank_ == b.rank_ && a.comps_ == b.comps_;
	}

  private:
	int n_ = 0;
	int rank_ = 0;
	int order_ = 0;
	std::vector<Series> comps_;
};

/// Matrix product of rank-2 series tensors, truncated at `order`.
inline SeriesTensor matmul(const SeriesTensor &a, const SeriesTensor &b, int order)
{
	if (a.rank() != 2 || b.rank() != 2 || a.n() != b.n())
		throw std::invalid_argument("matmul: expected square matrices of equal size");
	const int n = a.n();
	SeriesTensor out(n, 2, order);
	for (int i = 0; i < n; ++i)
		for (int k = 0; k < n; ++k)
			for (int j = 0; j < n; ++j)
				Series::add_product(out[static_cast<std::size_t>(i * n + j)], a[static_cast<std::size_t>(i * n + k)], b[static_cast<std::size_t>(k * n + j)]);
	return out;
}

} // namespace jetiso
