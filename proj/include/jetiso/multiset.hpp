#pragma once

/// \file
/// Index bookkeeping shared by the tensor types: dense multi-indices over
/// {0..n-1}^m and non-decreasing multi-indices (multisets) with an exact
/// rank/unrank bijection.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace jetiso {

using Index = std::vector<int>;

/// Number of multisets of size k drawn from r values, C(k+r-1, k).
inline std::size_t multiset_count(int r, int k)
{
	if (k < 0 || r < 0)
		return 0;
	if (k == 0)
		return 1;
	if (r == 0)
		return 0;
	// C(k+r-1, k) with exact integer steps.
	std::uint64_t c = 1;
	for (int i = 1; i <= k; ++i)
		c = c * static_cast<std::uint64_t>(r - 1 + i) / static_cast<std::uint64_t>(i);
	return static_cast<std::size_t>(c);
}

inline std::size_t ipow(std::size_t base, int exp)
{
	std::size_t r = 1;
	for (int i = 0; i < exp; ++i)
		r *= base;
	return r;
}

/// Number of distinct orderings of the multiset, k!/prod(m_v!).
inline Rational multinomial(const Index &multiset)
{
	Index s = multiset;
	std::sort(s.begin(), s.end());
	Rational r = factorial(static_cast<long>(s.size()));
	std::size_t i = 0;
	while (i < s.size()) {
		std::size_t j = i;
		while (j < s.size() && s[j] == s[i])
			++j;
		r /= factorial(static_cast<long>(j - i));
		i = j;
	}
	return r;
}

/// All distinct permutations of the given values, in lexicographic order.
inline std::vector<Index> distinct_permutations(Index values)
{
	std::sort(values.begin(), values.end());
	std::vector<Index> out;
	do {
		out.push_back(values);
	} while (std::next_permutation(values.begin(), values.end()));
	return out;
}

/// Multisets of size k over {0..n-1}, stored as non-decreasing tuples in
/// lexicographic order.
class MultisetSpace
{
  public:
	MultisetSpace(int n, int k) : n_(n), k_(k)
	{
		if (n < 1 || k < 0)
			throw std::invalid_argument("MultisetSpace: need n >= 1 and k >= 0");
		counts_.assign(static_cast<std::size_t>(k + 1), std::vector<std::size_t>(static_cast<std::size_t>(n + 1)));
		for (int m = 0; m <= k; ++m)
			for (int r = 0; r <= n; ++r)
				counts_[m][r] = multiset_count(r, m);
		Index cur(static_cast<std::size_t>(k), 0);
		enumerate(cur, 0, 0);
	}

	int n() const { return n_; }
	int k() const { return k_; }
	std::size_t size() const { return elements_.size(); }
	const Index &operator[](std::size_t rank) const { return elements_[rank]; }
	const std::vector<Index> &elements() const { return elements_; }

	/// Rank of the multiset; the tuple need not be sorted.
	std::size_t rank(Index tuple) const
	{
		if (static_cast<int>(tuple.size()) != k_)
			throw std::invalid_argument("MultisetSpace: wrong multiset size");
		std::sort(tuple.begin(), tuple.end());
		return rank_sorted(tuple);
	}

	std::size_t rank_sorted(const Index &sorted) const
	{
		std::size_t r = 0;
		int prev = 0;
		for (int p = 0; p < k_; ++p) {
			int v = sorted[static_cast<std::size_t>(p)];
			if (v < prev || v >= n_)
				throw std::invalid_argument("MultisetSpace: index out of range");
			for (int w = prev; w < v; ++w)
				r += counts_[static_cast<std::size_t>(k_ - p - 1)][static_cast<std::size_t>(n_ - w)];
			prev = v;
		}
		return r;
	}

  private:
	void enumerate(Index &cur, int pos, int lo)
	{
		if (pos == k_) {
			elements_.push_back(cur);
			return;
		}
		for (int v = lo; v < n_; ++v) {
			cur[static_cast<std::size_t>(pos)] = v;
			enumerate(cur, pos + 1, v);
		}
	}

	int n_;
	int k_;
	std::vector<std::vector<std::size_t>> counts_;
	std::vector<Index> elements_;
};

/// Row-major offsets of {0..n-1}^m.
class DenseShape
{
  public:
	DenseShape(int n, int arity) : n_(n), arity_(arity), size_(ipow(static_cast<std::size_t>(n), arity)) {}

	int n() const { return n_; }
	int arity() const { return arity_; }
	std::size_t size() const { return size_; }

	std::size_t offset(const Index &idx) const
	{
		if (static_cast<int>(idx.size()) != arity_)
			throw std::invalid_argument("DenseShape: wrong index length");
		std::size_t o = 0;
		for (int v : idx) {
			if (v < 0 || v >= n_)
				throw std::invalid_argument("DenseShape: index out of range");
			o = o * static_cast<std::size_t>(n_) + static_cast<std::size_t>(v);
		}
		return o;
	}

	Index unflatten(std::size_t offset) const
	{
		Index idx(static_cast<std::size_t>(arity_));
		for (int p = arity_ - 1; p >= 0; --p) {
			idx[static_cast<std::size_t>(p)] = static_cast<int>(offset % static_cast<std::size_t>(n_));
			offset /= static_cast<std::size_t>(n_);
		}
		return idx;
	}

	/// Advances idx to the next tuple in row-major order; false after the last.
	bool next(Index &idx) const
	{
		for (int p = arity_ - 1; p >= 0; --p) {
			if (++idx[static_cast<std::size_t>(p)] < n_)
				return true;
			idx[static_cast<std::size_t>(p)] = 0;
		}
		return false;
	}

  private:
	int n_;
	int arity_;
	std::size_t size_;
};

} // namespace jetiso
