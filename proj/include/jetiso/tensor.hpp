#pragma once

/// \file
/// Exact multilinear algebra over a pseudo-Euclidean space with diagonal
/// signature: symmetric pair tensors in Sym^k V* (x) Sym^2 V*, dense tensors
/// in (x)^m V*, polarization, the spaces N_k and the Kulkarni-Nomizu product.
///
/// Components are the values of the multilinear form on basis vectors, e.g.
/// a SymPairTensor entry (I; a, b) is h(e_I; e_a, e_b).

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "exactla.hpp"
#include "multiset.hpp"
#include "rational.hpp"

namespace jetiso {

/// Shared, immutable multiset enumerations keyed by (n, k).
inline const MultisetSpace &multiset_space(int n, int k)
{
	static std::mutex mu;
	static std::map<std::pair<int, int>, std::unique_ptr<MultisetSpace>> cache;
	std::lock_guard lock(mu);
	auto &slot = cache[{n, k}];
	if (!slot)
		slot = std::make_unique<MultisetSpace>(n, k);
	return *slot;
}

/// (V, <.,.>) with <e_i, e_j> = signature[i] delta_ij.
class Space
{
  public:
	Space() = default;
	explicit Space(std::vector<int> signature) : signature_(std::move(signature))
	{
		if (signature_.size() < 2)
			throw std::invalid_argument("Space: dimension must be at least 2");
		for (int s : signature_)
			if (s != 1 && s != -1)
				throw std::invalid_argument("Space: signature entries must be +1 or -1");
	}

	static Space euclidean(int n) { return Space(std::vector<int>(static_cast<std::size_t>(std::max(n, 0)), 1)); }

	int n() const { return static_cast<int>(signature_.size()); }
	const std::vector<int> &signature() const { return signature_; }
	int eps(int i) const { return signature_[static_cast<std::size_t>(i)]; }

	Rational inner(const RatVector &x, const RatVector &y) const
	{
		Rational s;
		for (int i = 0; i < n(); ++i)
			s.add_product(x[static_cast<std::size_t>(i)] * Rational(eps(i)), y[static_cast<std::size_t>(i)]);
		return s;
	}

	RatMatrix metric_matrix() const
	{
		RatMatrix m(static_cast<std::size_t>(n()), static_cast<std::size_t>(n()));
		for (int i = 0; i < n(); ++i)
			m(static_cast<std::size_t>(i), static_cast<std::size_t>(i)) = eps(i);
		return m;
	}

	friend bool operator==(const Space &, const Space &) = default;

  private:
	std::vector<int> signature_;
};

inline RatVector basis_vector(int n, int i)
{
	RatVector v(static_cast<std::size_t>(n));
	v[static_cast<std::size_t>(i)] = 1;
	return v;
}

// ---------------------------------------------------------------------------
// Homogeneous polynomials and symmetric multilinear maps with values in Q^width.

/// Homogeneous polynomial V -> Q^width; coefficient of the monomial xi^I at
/// (rank(I), w).
struct HomPoly
{
	int n = 0;
	int degree = 0;
	int width = 1;
	std::vector<Rational> coeffs;

	HomPoly() = default;
	HomPoly(int n_, int degree_, int width_)
	    : n(n_), degree(degree_), width(width_), coeffs(multiset_space(n_, degree_).size() * static_cast<std::size_t>(width_))
	{
	}

	Rational &at(const Index &monomial, int w) { return coeffs[slot(monomial, w)]; }
	const Rational &at(const Index &monomial, int w) const { return coeffs[slot(monomial, w)]; }

	RatVector operator()(const RatVector &xi) const
	{
		const auto &ms = multiset_space(n, degree);
		RatVector out(static_cast<std::size_t>(width));
		for (std::size_t r = 0; r < ms.size(); ++r) {
			Rational mono = 1;
			for (int i : ms[r])
				mono *= xi[static_cast<std::size_t>(i)];
			for (int w = 0; w < width; ++w)
				out[static_cast<std::size_t>(w)].add_product(mono, coeffs[r * static_cast<std::size_t>(width) + static_cast<std::size_t>(w)]);
		}
		return out;
	}

	friend bool operator==(const HomPoly &, const HomPoly &) = default;

  private:
	std::size_t slot(const Index &monomial, int w) const
	{
		return multiset_space(n, degree).rank(monomial) * static_cast<std::size_t>(width) + static_cast<std::size_t>(w);
	}
};

/// Symmetric d-linear map V^d -> Q^width, stored by its values on sorted basis tuples.
struct SymMultilinear
{
	int n = 0;
	int degree = 0;
	int width = 1;
	std::vector<Rational> values;

	const Rational &at(const Index &tuple, int w) const
	{
		return values[multiset_space(n, degree).rank(tuple) * static_cast<std::size_t>(width) + static_cast<std::size_t>(w)];
	}

	RatVector operator()(const std::vector<RatVector> &args) const
	{
		if (static_cast<int>(args.size()) != degree)
			throw std::invalid_argument("SymMultilinear: wrong number of arguments");
		DenseShape shape(n, degree);
		RatVector out(static_cast<std::size_t>(width));
		Index idx(static_cast<std::size_t>(degree), 0);
		do {
			Rational w = 1;
			for (int p = 0; p < degree && !w.is_zero(); ++p)
				w *= args[static_cast<std::size_t>(p)][static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];
			if (w.is_zero())
				continue;
			for (int c = 0; c < width; ++c)
				out[static_cast<std::size_t>(c)].add_product(w, at(idx, c));
		} while (shape.next(idx));
		return out;
	}
};

/// The unique symmetric d-linear B with B(xi,...,xi) = p(xi).
inline SymMultilinear polarize(const HomPoly &p)
{
	const auto &ms = multiset_space(p.n, p.degree);
	SymMultilinear b{p.n, p.degree, p.width, std::vector<Rational>(p.coeffs.size())};
	for (std::size_t r = 0; r < ms.size(); ++r) {
		Rational inv = multinomial(ms[r]).inverse();
		for (int w = 0; w < p.width; ++w) {
			std::size_t s = r * static_cast<std::size_t>(p.width) + static_cast<std::size_t>(w);
			b.values[s] = p.coeffs[s] * inv;
		}
	}
	return b;
}

/// xi -> B(xi,...,xi).
inline HomPoly restrict_to_diagonal(const SymMultilinear &b)
{
	const auto &ms = multiset_space(b.n, b.degree);
	HomPoly p(b.n, b.degree, b.width);
	for (std::size_t r = 0; r < ms.size(); ++r) {
		Rational m = multinomial(ms[r]);
		for (int w = 0; w < b.width; ++w) {
			std::size_t s = r * static_cast<std::size_t>(b.width) + static_cast<std::size_t>(w);
			p.coeffs[s] = b.values[s] * m;
		}
	}
	return p;
}

// ---------------------------------------------------------------------------

/// Element of Sym^k V* (x) Sym^2 V*.
class SymPairTensor
{
  public:
	SymPairTensor() = default;
	SymPairTensor(Space space, int k) : space_(std::move(space)), k_(k)
	{
		if (k < 0)
			throw std::invalid_argument("SymPairTensor: arity must be >= 0");
		sym_ = &multiset_space(space_.n(), k);
		pairs_ = &multiset_space(space_.n(), 2);
		components_.resize(sym_->size() * pairs_->size());
	}

	/// The inner product itself, as an element with k = 0.
	static SymPairTensor metric(const Space &space)
	{
		SymPairTensor g(space, 0);
		for (int i = 0; i < space.n(); ++i)
			g.at({}, i, i) = space.eps(i);
		return g;
	}

	const Space &space() const { return space_; }
	int n() const { return space_.n(); }
	int k() const { return k_; }
	std::size_t sym_count() const { return sym_ ? sym_->size() : 0; }
	std::size_t pair_count() const { return pairs_ ? pairs_->size() : 0; }
	const MultisetSpace &sym_space() const { return *sym_; }
	const MultisetSpace &pair_space() const { return *pairs_; }
	const std::vector<Rational> &components() const { return components_; }
	std::vector<Rational> &components() { return components_; }

	Rational &at(const Index &sym, int a, int b) { return components_[slot(sym, a, b)]; }
	const Rational &at(const Index &sym, int a, int b) const { return components_[slot(sym, a, b)]; }

	/// Entry by ranks in the sym/pair multiset enumerations.
	const Rational &at_rank(std::size_t sym_rank, std::size_t pair_rank) const
	{
		return components_[sym_rank * pair_count() + pair_rank];
	}
	Rational &at_rank(std::size_t sym_rank, std::size_t pair_rank) { return components_[sym_rank * pair_count() + pair_rank]; }

	bool is_zero() const
	{
		return std::all_of(components_.begin(), components_.end(), [](const Rational &x) { return x.is_zero(); });
	}

	SymPairTensor &operator+=(const SymPairTensor &o)
	{
		check_compatible(o);
		for (std::size_t i = 0; i < components_.size(); ++i)
			components_[i] += o.components_[i];
		return *this;
	}
	SymPairTensor &operator-=(const SymPairTensor &o)
	{
		check_compatible(o);
		for (std::size_t i = 0; i < components_.size(); ++i)
			components_[i] -= o.components_[i];
		return *this;
	}
	SymPairTensor &operator*=(const Rational &s)
	{
		for (auto &x : components_)
			x *= s;
		return *this;
	}
	friend SymPairTensor operator+(SymPairTensor a, const SymPairTensor &b) { return a += b; }
	friend SymPairTensor operator-(SymPairTensor a, const SymPairTensor &b) { return a -= b; }
	friend SymPairTensor operator*(SymPairTensor a, const Rational &s) { return a *= s; }
	friend SymPairTensor operator*(const Rational &s, SymPairTensor a) { return a *= s; }
	friend bool operator==(const SymPairTensor &, const SymPairTensor &) = default;

  private:
	std::size_t slot(const Index &sym, int a, int b) const
	{
		return sym_->rank(sym) * pairs_->size() + (a <= b ? pairs_->rank_sorted({a, b}) : pairs_->rank_sorted({b, a}));
	}

	void check_compatible(const SymPairTensor &o) const
	{
		if (!(space_ == o.space_) || k_ != o.k_)
			throw std::invalid_argument("SymPairTensor: incompatible operands");
	}

	Space space_;
	int k_ = 0;
	const MultisetSpace *sym_ = nullptr;
	const MultisetSpace *pairs_ = nullptr;
	std::vector<Rational> components_;
};

/// h(xs; y, z) for arbitrary vectors.
inline Rational eval_pair(const SymPairTensor &h, const std::vector<RatVector> &xs, const RatVector &y, const RatVector &z)
{
	const int n = h.n();
	if (static_cast<int>(xs.size()) != h.k())
		throw std::invalid_argument("eval_pair: expected " + std::to_string(h.k()) + " symmetric arguments");
	auto check = [&](const RatVector &v) {
		if (static_cast<int>(v.size()) != n)
			throw std::invalid_argument("eval_pair: dimension mismatch");
	};
	for (const auto &x : xs)
		check(x);
	check(y);
	check(z);

	Rational total;
	DenseShape shape(n, h.k());
	Index idx(static_cast<std::size_t>(h.k()), 0);
	do {
		Rational w = 1;
		for (int p = 0; p < h.k() && !w.is_zero(); ++p)
			w *= xs[static_cast<std::size_t>(p)][static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])];
		if (w.is_zero())
			continue;
		for (int a = 0; a < n; ++a) {
			if (y[static_cast<std::size_t>(a)].is_zero())
				continue;
			for (int b = 0; b < n; ++b) {
				if (z[static_cast<std::size_t>(b)].is_zero())
					continue;
				total.add_product(w * y[static_cast<std::size_t>(a)] * z[static_cast<std::size_t>(b)], h.at(idx, a, b));
			}
		}
	} while (shape.next(idx));
	return total;
}

/// xi -> h(xi,...,xi; ., .) as a homogeneous polynomial with values in
/// Sym^2 V* (width = number of pairs a <= b).
inline HomPoly pair_polynomial(const SymPairTensor &h)
{
	HomPoly p(h.n(), h.k(), static_cast<int>(h.pair_count()));
	const auto &ms = multiset_space(h.n(), h.k());
	for (std::size_t r = 0; r < ms.size(); ++r) {
		Rational m = multinomial(ms[r]);
		for (std::size_t q = 0; q < h.pair_count(); ++q)
			p.coeffs[r * h.pair_count() + q] = m * h.at_rank(r, q);
	}
	return p;
}

/// Inverse of pair_polynomial: polarization in the symmetric slots.
inline SymPairTensor pair_tensor_from_polynomial(const Space &space, const HomPoly &p)
{
	SymPairTensor h(space, p.degree);
	if (p.n != space.n() || p.width != static_cast<int>(h.pair_count()))
		throw std::invalid_argument("pair_tensor_from_polynomial: shape mismatch");
	SymMultilinear b = polarize(p);
	h.components() = b.values;
	return h;
}

// ---------------------------------------------------------------------------
// N_k: kernel of Sym^k V* (x) Sym^2 V* -> Sym^{k+1} V* (x) V*.

/// Sparse rows of the symmetrization map (up to row scaling); row (J, b),
/// column (I, {a,c}).
inline std::vector<std::vector<std::pair<std::size_t, Rational>>> symmetrization_rows(int n, int k)
{
	const auto &target = multiset_space(n, k + 1);
	const auto &source = multiset_space(n, k);
	const auto &pairs = multiset_space(n, 2);
	std::vector<std::vector<std::pair<std::size_t, Rational>>> rows;
	for (std::size_t jr = 0; jr < target.size(); ++jr) {
		const Index &J = target[jr];
		for (int b = 0; b < n; ++b) {
			std::vector<std::pair<std::size_t, Rational>> row;
			for (std::size_t p = 0; p < J.size(); ++p) {
				if (p > 0 && J[p] == J[p - 1])
					continue; // one entry per distinct value, weighted by multiplicity
				long mult = static_cast<long>(std::count(J.begin(), J.end(), J[p]));
				Index rest = J;
				rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
				std::size_t col = source.rank_sorted(rest) * pairs.size() + pairs.rank({J[p], b});
				row.emplace_back(col, Rational(mult));
			}
			rows.push_back(std::move(row));
		}
	}
	return rows;
}

/// Exact test of h(xi,...,xi; xi, .) == 0 for all xi.
inline bool is_in_N(const SymPairTensor &h)
{
	for (const auto &row : symmetrization_rows(h.n(), h.k())) {
		Rational s;
		for (const auto &[col, w] : row)
			s.add_product(w, h.components()[col]);
		if (!s.is_zero())
			return false;
	}
	return true;
}

/// Basis of N_k as the nullspace of the symmetrization map.
inline std::vector<SymPairTensor> n_basis(const Space &space, int k)
{
	if (k < 1)
		throw std::invalid_argument("n_basis: k must be >= 1");
	SymPairTensor proto(space, k);
	RowReducer red(proto.components().size());
	for (const auto &row : symmetrization_rows(space.n(), k))
		red.add_sparse_row(row);
	std::vector<SymPairTensor> basis;
	for (auto &v : red.nullspace_basis()) {
		SymPairTensor h(space, k);
		h.components() = std::move(v);
		basis.push_back(std::move(h));
	}
	return basis;
}

inline long rational_to_long(const Rational &r)
{
	if (!r.is_integer())
		throw std::logic_error("expected an integer, got " + r.to_string());
	return std::stol(r.to_string());
}

/// dim N_k = n(n+1)/2 C(k+n-1, n-1) - n C(k+n, n-1).
inline long dim_N(int n, int k)
{
	if (n < 2 || k < 1)
		throw std::invalid_argument("dim_N: need n >= 2 and k >= 1");
	Rational d = Rational(static_cast<long>(n) * (n + 1) / 2) * binomial(k + n - 1, n - 1) - Rational(n) * binomial(k + n, n - 1);
	return rational_to_long(d);
}

/// Lower bound n(k+1)/2 C(k+n+1, n-2) for dim C_k.
inline long dim_C_lower(int n, int k)
{
	if (n < 2 || k < 0)
		throw std::invalid_argument("dim_C_lower: need n >= 2 and k >= 0");
	Rational d = Rational(static_cast<long>(n) * (k + 1)) / Rational(2) * binomial(k + n + 1, n - 2);
	return rational_to_long(d);
}

// ---------------------------------------------------------------------------

/// Element of (x)^m V*, dense row-major.
class MultiTensor
{
  public:
	MultiTensor() = default;
	MultiTensor(Space space, int arity)
	    : space_(std::move(space)), arity_(arity), components_(ipow(static_cast<std::size_t>(space_.n()), arity))
	{
		if (arity < 0)
			throw std::invalid_argument("MultiTensor: arity must be >= 0");
	}

	const Space &space() const { return space_; }
	int n() const { return space_.n(); }
	int arity() const { return arity_; }
	DenseShape shape() const { return DenseShape(n(), arity_); }
	std::size_t size() const { return components_.size(); }

	Rational &at(const Index &idx) { return components_[shape().offset(idx)]; }
	const Rational &at(const Index &idx) const { return components_[shape().offset(idx)]; }
	Rational &operator[](std::size_t offset) { return components_[offset]; }
	const Rational &operator[](std::size_t offset) const { return components_[offset]; }
	const std::vector<Rational> &components() const { return components_; }
	std::vector<Rational> &components() { return components_; }

	bool is_zero() const
	{
		return std::all_of(components_.begin(), components_.end(), [](const Rational &x) { return x.is_zero(); });
	}

	MultiTensor &operator+=(const MultiTensor &o)
	{
		check_compatible(o);
		for (std::size_t i = 0; i < components_.size(); ++i)
			components_[i] += o.components_[i];
		return *this;
	}
	MultiTensor &operator-=(const MultiTensor &o)
	{
		check_compatible(o);
		for (std::size_t i = 0; i < components_.size(); ++i)
			components_[i] -= o.components_[i];
		return *this;
	}
	MultiTensor &operator*=(const Rational &s)
	{
		for (auto &x : components_)
			x *= s;
		return *this;
	}
	friend MultiTensor operator+(MultiTensor a, const MultiTensor &b) { return a += b; }
	friend MultiTensor operator-(MultiTensor a, const MultiTensor &b) { return a -= b; }
	friend MultiTensor operator*(MultiTensor a, const Rational &s) { return a *= s; }
	friend MultiTensor operator*(const Rational &s, MultiTensor a) { return a *= s; }
	friend bool operator==(const MultiTensor &, const MultiTensor &) = default;

  private:
	void check_compatible(const MultiTensor &o) const
	{
		if (!(space_ == o.space_) || arity_ != o.arity_)
			throw std::invalid_argument("MultiTensor: incompatible operands");
	}

	Space space_;
	int arity_ = 0;
	std::vector<Rational> components_;
};

/// Kulkarni-Nomizu product of h in Sym^{k+2} V* (x) Sym^2 V*:
///   T(x_1..x_k; a,b,c,d) = h(x,a,c; b,d) - h(x,b,c; a,d) - h(x,a,d; b,c) + h(x,b,d; a,c).
inline MultiTensor kulkarni(const SymPairTensor &h)
{
	if (h.k() < 2)
		throw std::invalid_argument("kulkarni: symmetric arity must be at least 2");
	const int k = h.k() - 2;
	MultiTensor t(h.space(), k + 4);
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(k + 4), 0);
	Index sym(static_cast<std::size_t>(k + 2));
	auto term = [&](int u, int v, int y, int z) -> const Rational & {
		sym[static_cast<std::size_t>(k)] = u;
		sym[static_cast<std::size_t>(k + 1)] = v;
		return h.at(sym, y, z);
	};
	std::size_t off = 0;
	do {
		std::copy(idx.begin(), idx.begin() + k, sym.begin());
		const int a = idx[static_cast<std::size_t>(k)], b = idx[static_cast<std::size_t>(k + 1)];
		const int c = idx[static_cast<std::size_t>(k + 2)], d = idx[static_cast<std::size_t>(k + 3)];
		Rational v = term(a, c, b, d);
		v -= term(b, c, a, d);
		v -= term(a, d, b, c);
		v += term(b, d, a, c);
		t[off++] = v;
	} while (shape.next(idx));
	return t;
}

// ---------------------------------------------------------------------------
// Signed permutations: the finite subgroup of O(V, <.,.>) permuting basis
// vectors of equal signature up to sign.

/// P e_i = sign[i] e_{perm[i]}.
struct SignedPermutation
{
	std::vector<int> perm;
	std::vector<int> sign;

	bool preserves(const Space &space) const
	{
		if (static_cast<int>(perm.size()) != space.n() || sign.size() != perm.size())
			return false;
		for (int i = 0; i < space.n(); ++i)
			if (space.eps(perm[static_cast<std::size_t>(i)]) != space.eps(i))
				return false;
		return true;
	}

	static SignedPermutation random(const Space &space, std::mt19937_64 &rng)
	{
		const int n = space.n();
		SignedPermutation p{std::vector<int>(static_cast<std::size_t>(n)), std::vector<int>(static_cast<std::size_t>(n))};
		for (int s : {1, -1}) {
			std::vector<int> block;
			for (int i = 0; i < n; ++i)
				if (space.eps(i) == s)
					block.push_back(i);
			std::vector<int> image = block;
			std::shuffle(image.begin(), image.end(), rng);
			for (std::size_t j = 0; j < block.size(); ++j)
				p.perm[static_cast<std::size_t>(block[j])] = image[j];
		}
		std::uniform_int_distribution<int> coin(0, 1);
		for (auto &s : p.sign)
			s = coin(rng) ? 1 : -1;
		return p;
	}
};

/// (P.T)(v_1..v_m) = T(P^{-1} v_1, ..., P^{-1} v_m).
inline MultiTensor transform(const SignedPermutation &p, const MultiTensor &t)
{
	if (!p.preserves(t.space()))
		throw std::invalid_argument("transform: permutation does not preserve the signature");
	MultiTensor out(t.space(), t.arity());
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.arity()), 0), img(static_cast<std::size_t>(t.arity()));
	std::size_t off = 0;
	do {
		int s = 1;
		for (std::size_t r = 0; r < idx.size(); ++r) {
			img[r] = p.perm[static_cast<std::size_t>(idx[r])];
			s *= p.sign[static_cast<std::size_t>(idx[r])];
		}
		out.at(img) = s > 0 ? t[off] : -t[off];
		++off;
	} while (shape.next(idx));
	return out;
}

inline SymPairTensor transform(const SignedPermutation &p, const SymPairTensor &h)
{
	if (!p.preserves(h.space()))
		throw std::invalid_argument("transform: permutation does not preserve the signature");
	SymPairTensor out(h.space(), h.k());
	const auto &ms = multiset_space(h.n(), h.k());
	for (std::size_t r = 0; r < ms.size(); ++r) {
		const Index &I = ms[r];
		Index img(I.size());
		int s = 1;
		for (std::size_t q = 0; q < I.size(); ++q) {
			img[q] = p.perm[static_cast<std::size_t>(I[q])];
			s *= p.sign[static_cast<std::size_t>(I[q])];
		}
		for (int a = 0; a < h.n(); ++a)
			for (int b = a; b < h.n(); ++b) {
				int sab = s * p.sign[static_cast<std::size_t>(a)] * p.sign[static_cast<std::size_t>(b)];
				const Rational &v = h.at(I, a, b);
				out.at(img, p.perm[static_cast<std::size_t>(a)], p.perm[static_cast<std::size_t>(b)]) = sab > 0 ? v : -v;
			}
	}
	return out;
}

} // namespace jetiso
