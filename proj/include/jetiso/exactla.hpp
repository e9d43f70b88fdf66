#pragma once

/// \file
/// Dense exact linear algebra over the rationals: reduced row-echelon form,
/// nullspaces and particular solutions of affine systems.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace jetiso {

using RatVector = std::vector<Rational>;

class RatMatrix
{
  public:
	RatMatrix() = default;
	RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

	RatMatrix(std::initializer_list<std::initializer_list<Rational>> init)
	{
		rows_ = init.size();
		cols_ = rows_ ? init.begin()->size() : 0;
		entries_.reserve(rows_ * cols_);
		for (const auto &row : init) {
			if (row.size() != cols_)
				throw std::invalid_argument("RatMatrix: ragged initializer");
			entries_.insert(entries_.end(), row.begin(), row.end());
		}
	}

	static RatMatrix identity(std::size_t n)
	{
		RatMatrix m(n, n);
		for (std::size_t i = 0; i < n; ++i)
			m(i, i) = 1;
		return m;
	}

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	Rational &operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
	const Rational &operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

	const std::vector<Rational> &entries() const { return entries_; }

	RatVector row(std::size_t r) const
	{
		return RatVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
		                 entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
	}

	bool is_zero() const
	{
		return std::all_of(entries_.begin(), entries_.end(), [](const Rational &x) { return x.is_zero(); });
	}

	RatMatrix transpose() const
	{
		RatMatrix t(cols_, rows_);
		for (std::size_t r = 0; r < rows_; ++r)
			for (std::size_t c = 0; c < cols_; ++c)
				t(c, r) = (*this)(r, c);
		return t;
	}

	friend RatMatrix operator*(const RatMatrix &a, const RatMatrix &b)
	{
		if (a.cols_ != b.rows_)
			throw std::invalid_argument("RatMatrix: shape mismatch in product");
		RatMatrix p(a.rows_, b.cols_);
		for (std::size_t i = 0; i < a.rows_; ++i)
			for (std::size_t k = 0; k < a.cols_; ++k) {
				const Rational &x = a(i, k);
				if (x.is_zero())
					continue;
				for (std::size_t j = 0; j < b.cols_; ++j)
					p(i, j).add_product(x, b(k, j));
			}
		return p;
	}

	friend RatVector operator*(const RatMatrix &a, const RatVector &v)
	{
		if (a.cols_ != v.size())
			throw std::invalid_argument("RatMatrix: shape mismatch in matrix-vector product");
		RatVector out(a.rows_);
		for (std::size_t i = 0; i < a.rows_; ++i)
			for (std::size_t k = 0; k < a.cols_; ++k)
				out[i].add_product(a(i, k), v[k]);
		return out;
	}

	RatMatrix &operator+=(const RatMatrix &o)
	{
		check_same_shape(o);
		for (std::size_t i = 0; i < entries_.size(); ++i)
			entries_[i] += o.entries_[i];
		return *this;
	}

	RatMatrix &operator-=(const RatMatrix &o)
	{
		check_same_shape(o);
		for (std::size_t i = 0; i < entries_.size(); ++i)
			entries_[i] -= o.entries_[i];
		return *this;
	}

	RatMatrix &operator*=(const Rational &s)
	{
		for (auto &x : entries_)
			x *= s;
		return *this;
	}

	friend RatMatrix operator+(RatMatrix a, const RatMatrix &b) { return a += b; }
	friend RatMatrix operator-(RatMatrix a, const RatMatrix &b) { return a -= b; }
	friend RatMatrix operator*(RatMatrix a, const Rational &s) { return a *= s; }
	friend RatMatrix operator*(const Rational &s, RatMatrix a) { return a *= s; }

	friend bool operator==(const RatMatrix &a, const RatMatrix &b) = default;

  private:
	void check_same_shape(const RatMatrix &o) const
	{
		if (rows_ != o.rows_ || cols_ != o.cols_)
			throw std::invalid_argument("RatMatrix: shape mismatch");
	}

	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<Rational> entries_;
};

/// Incremental Gauss-Jordan elimination. Rows are fed one at a time and kept
/// sparse; a row that reduces to zero is discarded, so highly redundant
/// constraint systems cost only their rank in storage.
class RowReducer
{
  public:
	explicit RowReducer(std::size_t cols) : cols_(cols), pivot_row_of_(cols, -1), scratch_(cols) {}

	std::size_t cols() const { return cols_; }
	std::size_t rank() const { return rows_.size(); }

	/// Reduces the row against the current basis; returns true if it raised the rank.
	bool add_row(const RatVector &row)
	{
		if (row.size() != cols_)
			throw std::invalid_argument("RowReducer: row length mismatch");
		std::copy(row.begin(), row.end(), scratch_.begin());
		return absorb_scratch();
	}

	/// Sparse variant: (column, value) pairs, duplicates are summed.
	bool add_sparse_row(const std::vector<std::pair<std::size_t, Rational>> &entries)
	{
		std::fill(scratch_.begin(), scratch_.end(), Rational());
		for (const auto &[c, v] : entries) {
			if (c >= cols_)
				throw std::invalid_argument("RowReducer: column out of range");
			scratch_[c] += v;
		}
		return absorb_scratch();
	}

	/// Pivot columns in increasing order.
	std::vector<std::size_t> pivots() const
	{
		std::vector<std::size_t> p;
		for (const auto &r : rows_)
			p.push_back(r.pivot);
		std::sort(p.begin(), p.end());
		return p;
	}

	/// Reduced row-echelon form (only the nonzero rows, sorted by pivot).
	RatMatrix reduced() const
	{
		auto order = sorted_rows();
		RatMatrix m(order.size(), cols_);
		for (std::size_t i = 0; i < order.size(); ++i)
			for (const auto &[c, v] : rows_[order[i]].entries)
				m(i, c) = v;
		return m;
	}

	std::vector<RatVector> nullspace_basis() const
	{
		std::vector<RatVector> basis;
		for (std::size_t f = 0; f < cols_; ++f) {
			if (pivot_row_of_[f] >= 0)
				continue;
			RatVector v(cols_);
			v[f] = 1;
			for (const auto &r : rows_) {
				const Rational &x = coefficient(r, f);
				if (!x.is_zero())
					v[r.pivot] = -x;
			}
			basis.push_back(std::move(v));
		}
		return basis;
	}

  private:
	struct Row
	{
		std::size_t pivot;
		std::vector<std::pair<std::size_t, Rational>> entries; // sorted by column, pivot entry is 1
	};

	static const Rational &coefficient(const Row &r, std::size_t col)
	{
		static const Rational zero;
		auto it = std::lower_bound(r.entries.begin(), r.entries.end(), col,
		                           [](const auto &e, std::size_t c) { return e.first < c; });
		return (it != r.entries.end() && it->first == col) ? it->second : zero;
	}

	bool absorb_scratch()
	{
		for (const auto &r : rows_) {
			Rational f = scratch_[r.pivot];
			if (f.is_zero())
				continue;
			for (const auto &[c, v] : r.entries)
				scratch_[c] -= f * v;
		}
		std::size_t pivot = cols_;
		for (std::size_t c = 0; c < cols_; ++c)
			if (!scratch_[c].is_zero()) {
				pivot = c;
				break;
			}
		if (pivot == cols_)
			return false;

		Row fresh{pivot, {}};
		Rational inv = scratch_[pivot].inverse();
		for (std::size_t c = pivot; c < cols_; ++c)
			if (!scratch_[c].is_zero())
				fresh.entries.emplace_back(c, scratch_[c] * inv);

		// Keep every stored row reduced with respect to the new pivot.
		for (auto &r : rows_) {
			Rational f = coefficient(r, pivot);
			if (f.is_zero())
				continue;
			std::fill(scratch_.begin(), scratch_.end(), Rational());
			for (const auto &[c, v] : r.entries)
				scratch_[c] = v;
			for (const auto &[c, v] : fresh.entries)
				scratch_[c] -= f * v;
			r.entries.clear();
			for (std::size_t c = r.pivot; c < cols_; ++c)
				if (!scratch_[c].is_zero())
					r.entries.emplace_back(c, scratch_[c]);
		}
		pivot_row_of_[pivot] = static_cast<long>(rows_.size());
		rows_.push_back(std::move(fresh));
		return true;
	}

	std::vector<std::size_t> sorted_rows() const
	{
		std::vector<std::size_t> order(rows_.size());
		for (std::size_t i = 0; i < order.size(); ++i)
			order[i] = i;
		std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rows_[a].pivot < rows_[b].pivot; });
		return order;
	}

	std::size_t cols_;
	std::vector<Row> rows_;
	std::vector<long> pivot_row_of_;
	RatVector scratch_;
};

struct RrefResult
{
	RatMatrix reduced;
	std::vector<std::size_t> pivot_columns;
};

/// Reduced row-echelon form. The returned matrix keeps the input shape, with
/// zero rows at the bottom.
inline RrefResult rref(const RatMatrix &m)
{
	RowReducer red(m.cols());
	for (std::size_t r = 0; r < m.rows(); ++r)
		red.add_row(m.row(r));
	RatMatrix compact = red.reduced();
	RatMatrix full(m.rows(), m.cols());
	for (std::size_t r = 0; r < compact.rows(); ++r)
		for (std::size_t c = 0; c < m.cols(); ++c)
			full(r, c) = compact(r, c);
	return {std::move(full), red.pivots()};
}

inline std::size_t rank(const RatMatrix &m) { return rref(m).pivot_columns.size(); }

inline std::vector<RatVector> nullspace_basis(const RatMatrix &m)
{
	RowReducer red(m.cols());
	for (std::size_t r = 0; r < m.rows(); ++r)
		red.add_row(m.row(r));
	return red.nullspace_basis();
}

using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

inline std::optional<RatVector> particular_solution(const RowReducer &red, std::size_t n)
{
	RatMatrix reduced = red.reduced();
	RatVector x(n);
	for (std::size_t r = 0; r < reduced.rows(); ++r) {
		std::size_t p = 0;
		while (reduced(r, p).is_zero())
			++p;
		if (p == n)
			return std::nullopt;
		x[p] = reduced(r, n);
	}
	return x;
}

} // namespace detail

/// Some x with a x = b, free variables set to zero; nullopt if inconsistent.
inline std::optional<RatVector> solve_affine(const RatMatrix &a, const RatVector &b)
{
	if (a.rows() != b.size())
		throw std::invalid_argument("solve_affine: right-hand side length mismatch");
	const std::size_t n = a.cols();
	RowReducer red(n + 1);
	for (std::size_t r = 0; r < a.rows(); ++r) {
		RatVector row = a.row(r);
		row.push_back(b[r]);
		red.add_row(row);
	}
	return detail::particular_solution(red, n);
}

/// Sparse variant of solve_affine over `cols` unknowns.
inline std::optional<RatVector> solve_affine(std::size_t cols, const std::vector<SparseRow> &rows, const RatVector &b)
{
	if (rows.size() != b.size())
		throw std::invalid_argument("solve_affine: right-hand side length mismatch");
	RowReducer red(cols + 1);
	for (std::size_t r = 0; r < rows.size(); ++r) {
		SparseRow row = rows[r];
		row.emplace_back(cols, b[r]);
		red.add_sparse_row(row);
	}
	return detail::particular_solution(red, cols);
}

} // namespace jetiso
