#pragma once

/// \file
/// Algebraic curvature jets (R, DR, ..., D^k R) at a point: validation of the
/// curvature symmetries, both Bianchi identities and the iterated Ricci
/// identities; symmetrization into N_{l+2}; the Kulkarni-Nomizu
/// reconstruction of linear jets; the (k+2, 2) Young symmetrizer; and bases of
/// the spaces C_k of linear jets.
///
/// Slot convention: a level-l tensor T_l has arity l+4 with the derivative
/// slots first, T_l(x_1..x_l; a, b, c, d) = (D^l_{x_1..x_l} R)(a, b, c, d),
/// x_1 being the outermost derivative. The curvature tensor of the round
/// metric of curvature kappa is R(a,b,c,d) = kappa(<b,c><a,d> - <a,c><b,d>),
/// so R(x, xi, xi, y) is the (positive) Jacobi form on spheres.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "exactla.hpp"
#include "tensor.hpp"

namespace jetiso {

class CurvatureJet
{
  public:
	CurvatureJet() = default;

	/// The zero jet of the given order.
	CurvatureJet(Space space, int order) : space_(std::move(space))
	{
		if (order < 0)
			throw std::invalid_argument("CurvatureJet: order must be >= 0");
		for (int l = 0; l <= order; ++l)
			levels_.emplace_back(space_, l + 4);
	}

	CurvatureJet(Space space, std::vector<MultiTensor> levels) : space_(std::move(space)), levels_(std::move(levels))
	{
		if (levels_.empty())
			throw std::invalid_argument("CurvatureJet: at least one level required");
		for (std::size_t l = 0; l < levels_.size(); ++l) {
			if (levels_[l].arity() != static_cast<int>(l) + 4)
				throw std::invalid_argument("CurvatureJet: level " + std::to_string(l) + " must have arity " +
				                            std::to_string(l + 4));
			if (!(levels_[l].space() == space_))
				throw std::invalid_argument("CurvatureJet: level lives on a different space");
		}
	}

	const Space &space() const { return space_; }
	int order() const { return static_cast<int>(levels_.size()) - 1; }
	const MultiTensor &level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
	MultiTensor &level(int l) { return levels_.at(static_cast<std::size_t>(l)); }
	const std::vector<MultiTensor> &levels() const { return levels_; }

	CurvatureJet truncated(int order) const
	{
		if (order < 0 || order > this->order())
			throw std::invalid_argument("CurvatureJet: cannot truncate to order " + std::to_string(order));
		return CurvatureJet(space_, std::vector<MultiTensor>(levels_.begin(), levels_.begin() + order + 1));
	}

	friend bool operator==(const CurvatureJet &, const CurvatureJet &) = default;

  private:
	Space space_;
	std::vector<MultiTensor> levels_;
};

/// (S_0, ..., S_k) with S_l in Sym^{l+2} V* (x) Sym^2 V*.
class SymJet
{
  public:
	SymJet() = default;
	SymJet(Space space, int order) : space_(std::move(space))
	{
		if (order < 0)
			throw std::invalid_argument("SymJet: order must be >= 0");
		for (int l = 0; l <= order; ++l)
			levels_.emplace_back(space_, l + 2);
	}
	SymJet(Space space, std::vector<SymPairTensor> levels) : space_(std::move(space)), levels_(std::move(levels))
	{
		if (levels_.empty())
			throw std::invalid_argument("SymJet: at least one level required");
		for (std::size_t l = 0; l < levels_.size(); ++l)
			if (levels_[l].k() != static_cast<int>(l) + 2 || !(levels_[l].space() == space_))
				throw std::invalid_argument("SymJet: level " + std::to_string(l) + " must be in Sym^" +
				                            std::to_string(l + 2) + " (x) Sym^2 over the jet's space");
	}

	const Space &space() const { return space_; }
	int order() const { return static_cast<int>(levels_.size()) - 1; }
	const SymPairTensor &level(int l) const { return levels_.at(static_cast<std::size_t>(l)); }
	SymPairTensor &level(int l) { return levels_.at(static_cast<std::size_t>(l)); }
	const std::vector<SymPairTensor> &levels() const { return levels_; }

	/// Index of the first level outside N_{l+2}, if any.
	std::optional<int> first_invalid_level() const
	{
		for (int l = 0; l <= order(); ++l)
			if (!is_in_N(level(l)))
				return l;
		return std::nullopt;
	}

	/// Truncates, or pads with zero levels.
	SymJet resized(int order) const
	{
		SymJet out(space_, order);
		for (int l = 0; l <= std::min(order, this->order()); ++l)
			out.level(l) = level(l);
		return out;
	}

	friend bool operator==(const SymJet &, const SymJet &) = default;

  private:
	Space space_;
	std::vector<SymPairTensor> levels_;
};

/// The top component of a linear jet (0, ..., 0, T); T has arity order+4.
struct LinearJetComponent
{
	MultiTensor tensor;
	int order() const { return tensor.arity() - 4; }
};

// ---------------------------------------------------------------------------
// Violations

struct Violation
{
	int level = 0;
	std::string identity;          // antisymmetry, pair_symmetry, first_bianchi, second_bianchi, ricci
	std::pair<int, int> slots{0, 0}; // 1-based derivative slots for ricci, otherwise (0,0)
	Index max_violation_at;
	Rational magnitude;

	std::string to_string() const
	{
		std::ostringstream os;
		os << "level=" << level << " identity=" << identity;
		if (identity == "ricci")
			os << " slots=(" << slots.first << "," << slots.second << ")";
		os << " max_violation_at=[";
		for (std::size_t i = 0; i < max_violation_at.size(); ++i)
			os << (i ? "," : "") << max_violation_at[i];
		os << "]";
		return os.str();
	}
};

namespace detail {

/// Row-major strides of (x)^m V*.
inline std::vector<std::size_t> strides(int n, int arity)
{
	std::vector<std::size_t> s(static_cast<std::size_t>(arity));
	std::size_t acc = 1;
	for (int p = arity - 1; p >= 0; --p) {
		s[static_cast<std::size_t>(p)] = acc;
		acc *= static_cast<std::size_t>(n);
	}
	return s;
}

/// Tracks the largest |value| over a sweep of a level tensor.
class DefectTracker
{
  public:
	void observe(const Rational &v, const Index &idx)
	{
		if (v.is_zero())
			return;
		Rational a = abs(v);
		if (!found_ || a > worst_) {
			worst_ = a;
			at_ = idx;
			found_ = true;
		}
	}
	bool found() const { return found_; }
	Violation violation(int level, std::string identity, std::pair<int, int> slots = {0, 0}) const
	{
		return Violation{level, std::move(identity), slots, at_, worst_};
	}

  private:
	bool found_ = false;
	Rational worst_;
	Index at_;
};

} // namespace detail

/// Curvature-tensor identities of a level tensor with its derivative slots frozen.
inline std::vector<Violation> check_curvature_block(const MultiTensor &t, int level)
{
	const int m = t.arity();
	const int k = m - 4;
	const auto st = detail::strides(t.n(), m);
	detail::DefectTracker anti, pair, bianchi;
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(m), 0);
	auto off_with = [&](int a, int b, int c, int d) {
		std::size_t o = 0;
		for (int p = 0; p < k; ++p)
			o += st[static_cast<std::size_t>(p)] * static_cast<std::size_t>(idx[static_cast<std::size_t>(p)]);
		return o + st[static_cast<std::size_t>(k)] * static_cast<std::size_t>(a) + st[static_cast<std::size_t>(k + 1)] * static_cast<std::size_t>(b) +
		       st[static_cast<std::size_t>(k + 2)] * static_cast<std::size_t>(c) + st[static_cast<std::size_t>(k + 3)] * static_cast<std::size_t>(d);
	};
	std::size_t off = 0;
	do {
		const int a = idx[static_cast<std::size_t>(k)], b = idx[static_cast<std::size_t>(k + 1)];
		const int c = idx[static_cast<std::size_t>(k + 2)], d = idx[static_cast<std::size_t>(k + 3)];
		const Rational &v = t[off];
		anti.observe(v + t[off_with(b, a, c, d)], idx);
		pair.observe(v - t[off_with(c, d, a, b)], idx);
		bianchi.observe(v + t[off_with(b, c, a, d)] + t[off_with(c, a, b, d)], idx);
		++off;
	} while (shape.next(idx));
	std::vector<Violation> out;
	if (anti.found())
		out.push_back(anti.violation(level, "antisymmetry"));
	if (pair.found())
		out.push_back(pair.violation(level, "pair_symmetry"));
	if (bianchi.found())
		out.push_back(bianchi.violation(level, "first_bianchi"));
	return out;
}

/// Cyclic sum over (last derivative slot, a, b).
inline std::vector<Violation> check_second_bianchi(const MultiTensor &t, int level)
{
	const int m = t.arity();
	const int k = m - 4;
	if (k < 1)
		return {};
	const auto st = detail::strides(t.n(), m);
	detail::DefectTracker tr;
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(m), 0);
	const std::size_t sx = st[static_cast<std::size_t>(k - 1)], sa = st[static_cast<std::size_t>(k)], sb = st[static_cast<std::size_t>(k + 1)];
	std::size_t off = 0;
	do {
		const auto x = static_cast<std::size_t>(idx[static_cast<std::size_t>(k - 1)]);
		const auto a = static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
		const auto b = static_cast<std::size_t>(idx[static_cast<std::size_t>(k + 1)]);
		const std::size_t base = off - x * sx - a * sa - b * sb;
		Rational v = t[off] + t[base + a * sx + b * sa + x * sb] + t[base + b * sx + x * sa + a * sb];
		tr.observe(v, idx);
		++off;
	} while (shape.next(idx));
	if (tr.found())
		return {tr.violation(level, "second_bianchi")};
	return {};
}

/// Right-hand side of the Ricci identity for swapping derivative slots i and
/// i+1 (1-based) at the given level, evaluated at one index tuple:
///   sum over splittings A + B of the first i-1 directions of
///   ((D^{|A|}_A R)(x_i, x_{i+1}) . D^{|B|+l-i-1}_B R)(x_{i+2}, ..., a, b, c, d),
/// with an endomorphism acting as a derivation, (M.T)(v_1..v_m) = -sum_j T(.., M v_j, ..).
/// Uses only levels below l-1.
inline Rational ricci_rhs(const std::vector<MultiTensor> &levels, int level, int i, const Index &idx)
{
	const Space &space = levels.front().space();
	const int n = space.n();
	const int l = level;
	const Index prefix(idx.begin(), idx.begin() + (i - 1));
	const int x = idx[static_cast<std::size_t>(i - 1)], y = idx[static_cast<std::size_t>(i)];
	const Index z(idx.begin() + i + 1, idx.end()); // suffix derivative slots, then a, b, c, d
	const int p = i - 1;
	Rational total;
	for (unsigned mask = 0; mask < (1u << p); ++mask) {
		Index A, B;
		for (int q = 0; q < p; ++q)
			((mask >> q) & 1u ? A : B).push_back(prefix[static_cast<std::size_t>(q)]);
		const MultiTensor &outer = levels.at(A.size());
		const MultiTensor &inner = levels.at(B.size() + static_cast<std::size_t>(l - i - 1));
		Index oidx = A;
		oidx.push_back(x);
		oidx.push_back(y);
		oidx.push_back(0);
		oidx.push_back(0);
		Index iidx = B;
		iidx.insert(iidx.end(), z.begin(), z.end());
		const std::size_t zpos = B.size();
		for (std::size_t j = 0; j < z.size(); ++j) {
			oidx[oidx.size() - 2] = z[j];
			Index work = iidx;
			for (int mm = 0; mm < n; ++mm) {
				oidx.back() = mm;
				const Rational &endo = outer.at(oidx); // <M z_j, e_mm> = R_A(x, y, z_j, e_mm)
				if (endo.is_zero())
					continue;
				work[zpos + j] = mm;
				Rational term = endo * inner.at(work);
				if (space.eps(mm) < 0)
					term = -term;
				total -= term;
			}
		}
	}
	return total;
}

/// T_l - T_l(slots i <-> i+1) - ricci_rhs, over all index tuples.
inline MultiTensor ricci_defect(const CurvatureJet &j, int level, int i)
{
	if (level < 2 || level > j.order())
		throw std::invalid_argument("ricci_defect: level must satisfy 2 <= level <= order");
	if (i < 1 || i > level - 1)
		throw std::invalid_argument("ricci_defect: slot must satisfy 1 <= i <= level-1");
	const MultiTensor &t = j.level(level);
	MultiTensor out(j.space(), t.arity());
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.arity()), 0);
	std::size_t off = 0;
	do {
		Index sw = idx;
		std::swap(sw[static_cast<std::size_t>(i - 1)], sw[static_cast<std::size_t>(i)]);
		out[off] = t[off] - t.at(sw) - ricci_rhs(j.levels(), level, i, idx);
		++off;
	} while (shape.next(idx));
	return out;
}

inline std::vector<Violation> validate_curvature(const MultiTensor &t)
{
	if (t.arity() != 4)
		throw std::invalid_argument("validate_curvature: expected a 4-tensor");
	return check_curvature_block(t, 0);
}

/// Every violated identity, level by level; empty iff the jet is an algebraic
/// curvature jet.
inline std::vector<Violation> validate_jet(const CurvatureJet &j)
{
	std::vector<Violation> out;
	for (int l = 0; l <= j.order(); ++l) {
		auto add = [&](std::vector<Violation> v) { out.insert(out.end(), v.begin(), v.end()); };
		add(check_curvature_block(j.level(l), l));
		add(check_second_bianchi(j.level(l), l));
		for (int i = 1; i < l; ++i) {
			MultiTensor d = ricci_defect(j, l, i);
			detail::DefectTracker tr;
			DenseShape shape = d.shape();
			Index idx(static_cast<std::size_t>(d.arity()), 0);
			std::size_t off = 0;
			do
				tr.observe(d[off++], idx);
			while (shape.next(idx));
			if (tr.found())
				out.push_back(tr.violation(l, "ricci", {i, i + 1}));
		}
	}
	return out;
}

// ---------------------------------------------------------------------------
// Symmetrization  S_l(xi; x, y) = T_l(xi..xi; x, xi, xi, y), polarized.

inline SymPairTensor symmetrize_level(const MultiTensor &t)
{
	const int l = t.arity() - 4;
	if (l < 0)
		throw std::invalid_argument("symmetrize_level: arity must be at least 4");
	const int n = t.n();
	SymPairTensor s(t.space(), l + 2);
	const auto &ms = s.sym_space();
	const auto st = detail::strides(n, t.arity());
	for (std::size_t r = 0; r < ms.size(); ++r) {
		auto perms = distinct_permutations(ms[r]);
		std::vector<std::size_t> base(perms.size());
		for (std::size_t q = 0; q < perms.size(); ++q) {
			const Index &pi = perms[q];
			std::size_t o = 0;
			for (int p = 0; p < l; ++p)
				o += st[static_cast<std::size_t>(p)] * static_cast<std::size_t>(pi[static_cast<std::size_t>(p)]);
			o += st[static_cast<std::size_t>(l + 1)] * static_cast<std::size_t>(pi[static_cast<std::size_t>(l)]);
			o += st[static_cast<std::size_t>(l + 2)] * static_cast<std::size_t>(pi[static_cast<std::size_t>(l + 1)]);
			base[q] = o;
		}
		const Rational inv = Rational(static_cast<long>(perms.size())).inverse();
		for (int a = 0; a < n; ++a)
			for (int b = a; b < n; ++b) {
				Rational sum;
				const std::size_t ab = st[static_cast<std::size_t>(l)] * static_cast<std::size_t>(a) + st[static_cast<std::size_t>(l + 3)] * static_cast<std::size_t>(b);
				for (std::size_t o : base)
					sum += t[o + ab];
				s.at(ms[r], a, b) = sum * inv;
			}
	}
	return s;
}

/// (S_0, ..., S_k) of a valid jet.
inline SymJet symmetrize_jet(const CurvatureJet &j)
{
	auto violations = validate_jet(j);
	if (!violations.empty())
		throw std::invalid_argument("symmetrize_jet: invalid jet: " + violations.front().to_string());
	std::vector<SymPairTensor> levels;
	for (const auto &t : j.levels())
		levels.push_back(symmetrize_level(t));
	return SymJet(j.space(), std::move(levels));
}

/// The unique linear jet with symmetrization s in N_{k+2}: -(k+1)/(k+3) times
/// the Kulkarni-Nomizu product of s.
inline LinearJetComponent reconstruct_linear(const SymPairTensor &s)
{
	if (s.k() < 2)
		throw std::invalid_argument("reconstruct_linear: symmetric arity must be at least 2");
	if (!is_in_N(s))
		throw std::invalid_argument("reconstruct_linear: input is not in N_" + std::to_string(s.k()));
	const int k = s.k() - 2;
	return {kulkarni(s) * Rational(-(k + 1), k + 3)};
}

// ---------------------------------------------------------------------------
// Young symmetrizer of the tableau with rows {1,3,5,...,k+4} and {2,4}, where
// tableau slots 1..4 are the curvature slots a, b, c, d and 5..k+4 are the
// derivative slots. Unnormalized: row sum over (k+2)! * 2 permutations, then
// the four-term column alternation.

inline long hook_constant(int k)
{
	if (k < 0)
		throw std::invalid_argument("hook_constant: k must be >= 0");
	return rational_to_long(Rational(2L * (k + 3) * (k + 2)) * factorial(k));
}

inline MultiTensor young_symmetrize(const MultiTensor &t)
{
	const int k = t.arity() - 4;
	if (k < 0)
		throw std::invalid_argument("young_symmetrize: arity must be at least 4");
	const int n = t.n();
	const auto st = detail::strides(n, t.arity());

	// Positions (in storage order) of the long row and the short row.
	std::vector<int> long_row;
	for (int p = 0; p < k; ++p)
		long_row.push_back(p);
	long_row.push_back(k);     // tableau slot 1
	long_row.push_back(k + 2); // tableau slot 3
	const std::vector<int> short_row = {k + 1, k + 3};

	// The row sum depends only on the multisets of values on each row; it is
	// the number of stabilizing permutations times the sum over distinct
	// arrangements.
	std::map<std::pair<Index, Index>, Rational> row_cache;
	auto row_sum = [&](const Index &idx) -> const Rational & {
		Index lv, sv;
		for (int p : long_row)
			lv.push_back(idx[static_cast<std::size_t>(p)]);
		for (int p : short_row)
			sv.push_back(idx[static_cast<std::size_t>(p)]);
		std::sort(lv.begin(), lv.end());
		std::sort(sv.begin(), sv.end());
		auto key = std::make_pair(lv, sv);
		auto it = row_cache.find(key);
		if (it != row_cache.end())
			return it->second;
		Rational stab = factorial(static_cast<long>(lv.size())) / multinomial(lv) * factorial(2) / multinomial(sv);
		Rational sum;
		auto lperms = distinct_permutations(lv);
		auto sperms = distinct_permutations(sv);
		for (const auto &lp : lperms)
			for (const auto &sp : sperms) {
				std::size_t o = 0;
				for (std::size_t q = 0; q < long_row.size(); ++q)
					o += st[static_cast<std::size_t>(long_row[q])] * static_cast<std::size_t>(lp[q]);
				for (std::size_t q = 0; q < short_row.size(); ++q)
					o += st[static_cast<std::size_t>(short_row[q])] * static_cast<std::size_t>(sp[q]);
				sum += t[o];
			}
		return row_cache.emplace(std::move(key), sum * stab).first->second;
	};

	MultiTensor out(t.space(), t.arity());
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.arity()), 0);
	const auto a = static_cast<std::size_t>(k), b = static_cast<std::size_t>(k + 1);
	const auto c = static_cast<std::size_t>(k + 2), d = static_cast<std::size_t>(k + 3);
	std::size_t off = 0;
	do {
		Index w = idx;
		Rational v = row_sum(w);
		std::swap(w[a], w[b]);
		v -= row_sum(w);
		std::swap(w[c], w[d]);
		v += row_sum(w);
		std::swap(w[a], w[b]);
		v -= row_sum(w);
		out[off++] = v;
	} while (shape.next(idx));
	return out;
}

// ---------------------------------------------------------------------------
// C_0 and C_k bases.

/// Basis of algebraic curvature tensors. Unknowns are the entries R(a,b,c,d)
/// with a<b, c<d, (a,b) <= (c,d); the remaining entries follow from
/// antisymmetry and pair symmetry, and the first Bianchi identity cuts out the
/// nullspace.
inline std::vector<MultiTensor> curvature_tensor_basis(const Space &space)
{
	const int n = space.n();
	std::vector<std::pair<int, int>> pairs;
	for (int a = 0; a < n; ++a)
		for (int b = a + 1; b < n; ++b)
			pairs.emplace_back(a, b);
	const std::size_t np = pairs.size();
	auto pair_index = [&](int a, int b) {
		return static_cast<std::size_t>(std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) - pairs.begin());
	};
	auto unknown = [&](std::size_t p, std::size_t q) {
		if (p > q)
			std::swap(p, q);
		return p * np - p * (p - 1) / 2 + (q - p); // upper-triangular rank
	};
	const std::size_t cols = np * (np + 1) / 2;
	// Entry R(a,b,c,d) as (sign, unknown) or sign 0.
	auto entry = [&](int a, int b, int c, int d) -> std::pair<int, std::size_t> {
		if (a == b || c == d)
			return {0, 0};
		int s = 1;
		if (a > b) {
			std::swap(a, b);
			s = -s;
		}
		if (c > d) {
			std::swap(c, d);
			s = -s;
		}
		return {s, unknown(pair_index(a, b), pair_index(c, d))};
	};

	RowReducer red(cols);
	for (int a = 0; a < n; ++a)
		for (int b = a + 1; b < n; ++b)
			for (int c = b + 1; c < n; ++c)
				for (int d = 0; d < n; ++d) {
					std::vector<std::pair<std::size_t, Rational>> row;
					for (auto [s, u] : {entry(a, b, c, d), entry(b, c, a, d), entry(c, a, b, d)})
						if (s != 0)
							row.emplace_back(u, Rational(s));
					red.add_sparse_row(row);
				}

	std::vector<MultiTensor> basis;
	for (const auto &v : red.nullspace_basis()) {
		MultiTensor t(space, 4);
		Index idx(4, 0);
		DenseShape shape = t.shape();
		std::size_t off = 0;
		do {
			auto [s, u] = entry(idx[0], idx[1], idx[2], idx[3]);
			if (s != 0)
				t[off] = s > 0 ? v[u] : -v[u];
			++off;
		} while (shape.next(idx));
		basis.push_back(std::move(t));
	}
	return basis;
}

/// Basis of C_k = Sym^k V* (x) C_0  cap  Sym^{k-1} V* (x) C_1. Unknowns are
/// the coordinates of T(e_I; .) in the C_0 basis for every multiset I of
/// derivative directions; the second Bianchi identity, totally antisymmetric
/// in (x, a, b), is imposed for x < a < b and c < d.
inline std::vector<LinearJetComponent> c_basis(const Space &space, int k)
{
	if (k < 0)
		throw std::invalid_argument("c_basis: k must be >= 0");
	const int n = space.n();
	const auto c0 = curvature_tensor_basis(space);
	if (k == 0) {
		std::vector<LinearJetComponent> out;
		for (const auto &t : c0)
			out.push_back({t});
		return out;
	}
	const auto &derivs = multiset_space(n, k);
	const std::size_t nb = c0.size();
	const std::size_t cols = derivs.size() * nb;

	RowReducer red(cols);
	const auto &prefixes = multiset_space(n, k - 1);
	for (const Index &pre : prefixes.elements())
		for (int x = 0; x < n; ++x)
			for (int a = x + 1; a < n; ++a)
				for (int b = a + 1; b < n; ++b)
					for (int c = 0; c < n; ++c)
						for (int d = c + 1; d < n; ++d) {
							std::vector<std::pair<std::size_t, Rational>> row;
							const int cyc[3][3] = {{x, a, b}, {a, b, x}, {b, x, a}};
							for (const auto &tri : cyc) {
								Index I = pre;
								I.push_back(tri[0]);
								const std::size_t base = derivs.rank(I) * nb;
								for (std::size_t beta = 0; beta < nb; ++beta) {
									const Rational &w = c0[beta].at({tri[1], tri[2], c, d});
									if (!w.is_zero())
										row.emplace_back(base + beta, w);
								}
							}
							red.add_sparse_row(row);
						}

	std::vector<LinearJetComponent> out;
	for (const auto &v : red.nullspace_basis()) {
		MultiTensor t(space, k + 4);
		DenseShape shape = t.shape();
		Index idx(static_cast<std::size_t>(k + 4), 0);
		std::size_t off = 0;
		do {
			const std::size_t base = derivs.rank(Index(idx.begin(), idx.begin() + k)) * nb;
			Rational val;
			for (std::size_t beta = 0; beta < nb; ++beta)
				val.add_product(v[base + beta], c0[beta].at(Index(idx.begin() + k, idx.end())));
			t[off++] = val;
		} while (shape.next(idx));
		out.push_back({std::move(t)});
	}
	return out;
}

/// Coordinates of t in the given basis, or nullopt if t is outside its span.
inline std::optional<RatVector> coordinates_in(const std::vector<LinearJetComponent> &basis, const MultiTensor &t)
{
	RatMatrix a(t.size(), basis.size());
	for (std::size_t c = 0; c < basis.size(); ++c)
		for (std::size_t r = 0; r < t.size(); ++r)
			a(r, c) = basis[c].tensor[r];
	return solve_affine(a, t.components());
}


// ---------------------------------------------------------------------------
// Extension by linear algebra: the top level of an order-(k+1) extension solves
// the second Bianchi identity and the Ricci identities, whose right-hand sides
// only involve the given levels.

inline std::optional<CurvatureJet> extend_jet_linear(const CurvatureJet &j)
{
	auto violations = validate_jet(j);
	if (!violations.empty())
		throw std::invalid_argument("extend_jet_linear: invalid jet: " + violations.front().to_string());
	const Space &space = j.space();
	const int n = space.n();
	const int k = j.order();
	const int top = k + 1;
	const auto c0 = curvature_tensor_basis(space);
	const std::size_t nb = c0.size();
	const DenseShape derivs(n, top);
	const std::size_t cols = derivs.size() * nb;

	std::vector<std::pair<int, int>> pairs;
	for (int a = 0; a < n; ++a)
		for (int b = a + 1; b < n; ++b)
			pairs.emplace_back(a, b);

	std::vector<SparseRow> rows;
	RatVector rhs;
	auto push_terms = [&](SparseRow &row, const Index &d, int a, int b, int c, int e, const Rational &sign) {
		const std::size_t base = derivs.offset(d) * nb;
		for (std::size_t beta = 0; beta < nb; ++beta) {
			const Rational &w = c0[beta].at({a, b, c, e});
			if (!w.is_zero())
				row.emplace_back(base + beta, sign * w);
		}
	};

	// Ricci identities for every adjacent swap.
	Index d(static_cast<std::size_t>(top), 0);
	for (int i = 1; i < top; ++i) {
		std::fill(d.begin(), d.end(), 0);
		do {
			if (d[static_cast<std::size_t>(i - 1)] >= d[static_cast<std::size_t>(i)])
				continue;
			Index sw = d;
			std::swap(sw[static_cast<std::size_t>(i - 1)], sw[static_cast<std::size_t>(i)]);
			for (auto [a, b] : pairs)
				for (auto [c, e] : pairs) {
					SparseRow row;
					push_terms(row, d, a, b, c, e, 1);
					push_terms(row, sw, a, b, c, e, -1);
					Index full = d;
					full.insert(full.end(), {a, b, c, e});
					rows.push_back(std::move(row));
					rhs.push_back(ricci_rhs(j.levels(), top, i, full));
				}
		} while (derivs.next(d));
	}

	// Second Bianchi identity in (last derivative slot, a, b).
	if (n >= 3) {
		const DenseShape prefixes(n, top - 1);
		Index pre(static_cast<std::size_t>(top - 1), 0);
		do {
			for (int x = 0; x < n; ++x)
				for (int a = x + 1; a < n; ++a)
					for (int b = a + 1; b < n; ++b)
						for (auto [c, e] : pairs) {
							SparseRow row;
							const int cyc[3][3] = {{x, a, b}, {a, b, x}, {b, x, a}};
							for (const auto &tri : cyc) {
								Index dd = pre;
								dd.push_back(tri[0]);
								push_terms(row, dd, tri[1], tri[2], c, e, 1);
							}
							rows.push_back(std::move(row));
							rhs.push_back(Rational());
						}
		} while (top - 1 > 0 && prefixes.next(pre));
	}

	auto sol = solve_affine(cols, rows, rhs);
	if (!sol)
		return std::nullopt;
	MultiTensor t(space, top + 4);
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(top + 4), 0);
	std::size_t off = 0;
	do {
		const std::size_t base = derivs.offset(Index(idx.begin(), idx.begin() + top)) * nb;
		Rational v;
		for (std::size_t beta = 0; beta < nb; ++beta)
			v.add_product((*sol)[base + beta], c0[beta].at(Index(idx.begin() + top, idx.end())));
		t[off++] = v;
	} while (shape.next(idx));
	std::vector<MultiTensor> levels = j.levels();
	levels.push_back(std::move(t));
	return CurvatureJet(space, std::move(levels));
}

// ---------------------------------------------------------------------------

inline CurvatureJet transform(const SignedPermutation &p, const CurvatureJet &j)
{
	std::vector<MultiTensor> levels;
	for (const auto &t : j.levels())
		levels.push_back(transform(p, t));
	return CurvatureJet(j.space(), std::move(levels));
}

inline SymJet transform(const SignedPermutation &p, const SymJet &s)
{
	std::vector<SymPairTensor> levels;
	for (const auto &t : s.levels())
		levels.push_back(transform(p, t));
	return SymJet(s.space(), std::move(levels));
}

} // namespace jetiso
