#pragma once

/// \file
/// Polynomial metrics in normal coordinates and their exact power-series
/// calculus: inverse metric, Christoffel symbols, curvature and its covariant
/// derivatives at the origin, the backwards parallel transport along radial
/// geodesics, and the Taylor reconstruction of the metric from a symmetrized
/// curvature jet.
///
/// Conventions: Gamma^i_{jk} = 1/2 g^{il} (d_j g_{lk} + d_k g_{jl} - d_l g_{jk});
/// R(X,Y)Z = D_X D_Y Z - D_Y D_X Z - D_[X,Y] Z with R(d_i,d_j)d_k = Rm^l_{ijk} d_l;
/// R(a,b,c,d) = g(R(e_a,e_b)e_c, e_d); new derivative slots are prepended.

#include <cstddef>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "freealg.hpp"
#include "jets.hpp"
#include "poly_end.hpp"
#include "series.hpp"
#include "tensor.hpp"

namespace jetiso {

/// Raised by make_normal_metric when a part leaves N_l.
class GaugeError : public std::invalid_argument
{
  public:
	GaugeError(int level, const std::string &what) : std::invalid_argument(what), level_(level) {}
	int level() const { return level_; }

  private:
	int level_;
};

/// g = <.,.> + h_1 + ... + h_m with h_l in Sym^l V* (x) Sym^2 V*.
class PolyMetric
{
  public:
	PolyMetric() = default;
	explicit PolyMetric(Space space) : space_(std::move(space)) {}

	/// No gauge check; see make_normal_metric.
	static PolyMetric unchecked(Space space, std::vector<SymPairTensor> parts)
	{
		PolyMetric g(std::move(space));
		for (std::size_t i = 0; i < parts.size(); ++i)
			if (parts[i].k() != static_cast<int>(i) + 1 || !(parts[i].space() == g.space_))
				throw std::invalid_argument("PolyMetric: part " + std::to_string(i + 1) + " must have symmetric arity " +
				                            std::to_string(i + 1) + " over the metric's space");
		g.parts_ = std::move(parts);
		return g;
	}

	const Space &space() const { return space_; }
	int order() const { return static_cast<int>(parts_.size()); }
	const std::vector<SymPairTensor> &parts() const { return parts_; }

	/// h_l, or zero beyond the stored order.
	SymPairTensor part(int l) const
	{
		if (l < 1)
			throw std::invalid_argument("PolyMetric: parts start at degree 1");
		if (l > order())
			return SymPairTensor(space_, l);
		return parts_[static_cast<std::size_t>(l - 1)];
	}

	/// g_{ab}(xi) as a rank-2 series truncated at K.
	SeriesTensor series(int K) const
	{
		const int n = space_.n();
		SeriesTensor g(n, 2, K);
		for (int a = 0; a < n; ++a)
			g[static_cast<std::size_t>(a * n + a)][0] = space_.eps(a);
		for (int l = 1; l <= std::min(K, order()); ++l) {
			const SymPairTensor &h = parts_[static_cast<std::size_t>(l - 1)];
			const auto &ms = h.sym_space();
			const MonomialIndex &mi = MonomialIndex::get(n, K);
			for (std::size_t r = 0; r < ms.size(); ++r) {
				std::vector<int> e(static_cast<std::size_t>(n), 0);
				for (int v : ms[r])
					++e[static_cast<std::size_t>(v)];
				const std::size_t m = mi.index(e);
				const Rational mult = multinomial(ms[r]);
				for (int a = 0; a < n; ++a)
					for (int b = 0; b < n; ++b)
						g[static_cast<std::size_t>(a * n + b)][m] += mult * h.at(ms[r], a, b);
			}
		}
		return g;
	}

	friend bool operator==(const PolyMetric &, const PolyMetric &) = default;

  private:
	Space space_;
	std::vector<SymPairTensor> parts_;
};

/// Normal-coordinate metric from parts h_1..h_m; each h_l must lie in N_l.
inline PolyMetric make_normal_metric(const Space &space, std::vector<SymPairTensor> parts)
{
	for (std::size_t i = 0; i < parts.size(); ++i) {
		const int l = static_cast<int>(i) + 1;
		if (parts[i].k() != l)
			throw std::invalid_argument("make_normal_metric: part " + std::to_string(l) + " must have symmetric arity " +
			                            std::to_string(l));
		if (!is_in_N(parts[i]))
			throw GaugeError(l, "make_normal_metric: part of degree " + std::to_string(l) + " is not in N_" +
			                        std::to_string(l));
	}
	return PolyMetric::unchecked(space, std::move(parts));
}

/// g_xi(xi, u) == <xi, u> as polynomials in (xi, u).
inline bool check_normal_gauge(const PolyMetric &g)
{
	const int n = g.space().n();
	const int K = g.order() + 1;
	const SeriesTensor gs = g.series(K);
	for (int b = 0; b < n; ++b) {
		Series s(n, K);
		for (int a = 0; a < n; ++a)
			Series::add_product(s, gs[static_cast<std::size_t>(a * n + b)], Series::variable(n, K, a));
		s -= Series::variable(n, K, b) * Rational(g.space().eps(b));
		if (!s.is_zero())
			return false;
	}
	return true;
}

/// g^{-1} truncated at K, as sum_m (-eta H)^m eta with g = eta + H.
inline SeriesTensor inverse_series(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	SeriesTensor eta(n, 2, K);
	for (int a = 0; a < n; ++a)
		eta[static_cast<std::size_t>(a * n + a)][0] = g.space().eps(a);
	SeriesTensor m = g.series(K);
	m -= eta;
	// -eta H: row a scaled by -eps(a).
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			m[static_cast<std::size_t>(a * n + b)] *= Rational(-g.space().eps(a));
	SeriesTensor power = eta;
	SeriesTensor acc = eta;
	for (int p = 1; p <= K; ++p) {
		power = matmul(m, power, K);
		if (power.is_zero())
			break;
		acc += power;
	}
	return acc;
}

/// Gamma^i_{jk} at offset (i*n + j)*n + k, truncated at K.
inline SeriesTensor christoffel_series(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	const auto N = static_cast<std::size_t>(n);
	const SeriesTensor gs = g.series(K + 1);
	const SeriesTensor ginv = inverse_series(g, K);
	// dg[(l*n + j)*n + k] = d_l g_{jk}
	std::vector<Series> dg(N * N * N);
	for (int l = 0; l < n; ++l)
		for (std::size_t jk = 0; jk < N * N; ++jk)
			dg[static_cast<std::size_t>(l) * N * N + jk] = gs[jk].derivative(l);
	auto d = [&](int l, int j, int k) -> const Series & {
		return dg[(static_cast<std::size_t>(l) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)];
	};
	// First-kind symbols Gamma_{ljk}.
	std::vector<Series> first(N * N * N);
	for (int l = 0; l < n; ++l)
		for (int j = 0; j < n; ++j)
			for (int k = j; k < n; ++k) {
				Series s = d(j, l, k) + d(k, j, l) - d(l, j, k);
				s *= Rational(1, 2);
				first[(static_cast<std::size_t>(l) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)] = s;
			}
	SeriesTensor gamma(n, 3, K);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			for (int k = j; k < n; ++k) {
				Series &out = gamma[(static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)];
				for (int l = 0; l < n; ++l)
					Series::add_product(out, ginv[static_cast<std::size_t>(i * n + l)],
					                    first[(static_cast<std::size_t>(l) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)]);
				gamma[(static_cast<std::size_t>(i) * N + static_cast<std::size_t>(k)) * N + static_cast<std::size_t>(j)] = out;
			}
	return gamma;
}

/// Rm^l_{ijk} at offset ((l*n + i)*n + j)*n + k, truncated at K.
inline SeriesTensor curvature_endomorphism_series(const SeriesTensor &gamma, int K)
{
	const int n = gamma.n();
	const auto N = static_cast<std::size_t>(n);
	auto G = [&](int a, int b, int c) -> const Series & {
		return gamma[(static_cast<std::size_t>(a) * N + static_cast<std::size_t>(b)) * N + static_cast<std::size_t>(c)];
	};
	// dG[v][offset of Gamma] = d_v Gamma
	std::vector<std::vector<Series>> dG(N);
	for (int v = 0; v < n; ++v)
		for (std::size_t o = 0; o < gamma.size(); ++o)
			dG[static_cast<std::size_t>(v)].push_back(gamma[o].derivative(v).reordered(K));
	auto dGam = [&](int v, int a, int b, int c) -> const Series & {
		return dG[static_cast<std::size_t>(v)][(static_cast<std::size_t>(a) * N + static_cast<std::size_t>(b)) * N + static_cast<std::size_t>(c)];
	};
	SeriesTensor rm(n, 4, K);
	std::size_t off = 0;
	for (int l = 0; l < n; ++l)
		for (int i = 0; i < n; ++i)
			for (int j = 0; j < n; ++j)
				for (int k = 0; k < n; ++k) {
					Series &out = rm[off++];
					if (i == j)
						continue;
					out += dGam(i, l, j, k);
					out -= dGam(j, l, i, k);
					for (int m = 0; m < n; ++m) {
						Series::add_product(out, G(l, i, m), G(m, j, k));
						Series::add_product(out, G(l, j, m) * Rational(-1), G(m, i, k));
					}
				}
	return rm;
}

/// (D T)_{v x_1..x_m} = d_v T_{x} - sum_j Gamma^q_{v x_j} T_{..q..}, truncated at K.
inline SeriesTensor covariant_derivative(const SeriesTensor &t, const SeriesTensor &gamma, int K)
{
	const int n = t.n();
	const int m = t.rank();
	const auto N = static_cast<std::size_t>(n);
	const std::size_t tsize = t.size();
	SeriesTensor out(n, m + 1, K);
	std::vector<std::size_t> stride(static_cast<std::size_t>(m));
	{
		std::size_t acc = 1;
		for (int p = m - 1; p >= 0; --p) {
			stride[static_cast<std::size_t>(p)] = acc;
			acc *= N;
		}
	}
	DenseShape shape(n, m);
	for (int v = 0; v < n; ++v) {
		Index x(static_cast<std::size_t>(m), 0);
		std::size_t toff = 0;
		do {
			Series &res = out[static_cast<std::size_t>(v) * tsize + toff];
			res = t[toff].derivative(v).reordered(K);
			for (int j = 0; j < m; ++j) {
				const auto xj = static_cast<std::size_t>(x[static_cast<std::size_t>(j)]);
				const std::size_t base = toff - xj * stride[static_cast<std::size_t>(j)];
				for (int q = 0; q < n; ++q) {
					const Series &gam = gamma[(static_cast<std::size_t>(q) * N + static_cast<std::size_t>(v)) * N + xj];
					Series neg = gam * Rational(-1);
					Series::add_product(res, neg, t[base + static_cast<std::size_t>(q) * stride[static_cast<std::size_t>(j)]]);
				}
			}
			++toff;
		} while (shape.next(x));
	}
	return out;
}

/// Lowered curvature R_{abcd} = Rm^m_{abc} g_{md}, truncated at K.
inline SeriesTensor curvature_series(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	const auto N = static_cast<std::size_t>(n);
	const SeriesTensor gamma = christoffel_series(g, K + 1);
	const SeriesTensor rm = curvature_endomorphism_series(gamma, K);
	const SeriesTensor gs = g.series(K);
	SeriesTensor r(n, 4, K);
	for (std::size_t abc = 0; abc < N * N * N; ++abc)
		for (int d = 0; d < n; ++d) {
			Series &out = r[abc * N + static_cast<std::size_t>(d)];
			for (int m = 0; m < n; ++m)
				Series::add_product(out, rm[static_cast<std::size_t>(m) * N * N * N + abc], gs[static_cast<std::size_t>(m * n + d)]);
		}
	return r;
}

/// (R, DR, ..., D^k R) at the origin.
inline CurvatureJet curvature_jet_at_origin(const PolyMetric &g, int k)
{
	if (k < 0)
		throw std::invalid_argument("curvature_jet_at_origin: order must be >= 0");
	const SeriesTensor gamma = christoffel_series(g, k + 1);
	SeriesTensor cur = curvature_series(g, k);
	std::vector<MultiTensor> levels;
	for (int l = 0; l <= k; ++l) {
		if (l > 0)
			cur = covariant_derivative(cur, gamma, k - l);
		MultiTensor t(g.space(), l + 4);
		for (std::size_t o = 0; o < t.size(); ++o)
			t[o] = cur[o][0];
		levels.push_back(std::move(t));
	}
	return CurvatureJet(g.space(), std::move(levels));
}

/// The Taylor polynomial sum_{l <= k+2} Q_l(S_0, ..., S_k)/l! as a metric.
inline PolyMetric metric_from_symjet(const SymJet &s)
{
	if (auto bad = s.first_invalid_level())
		throw std::invalid_argument("metric_from_symjet: level " + std::to_string(*bad) + " is not in N_" +
		                            std::to_string(*bad + 2));
	const Space &space = s.space();
	const int k = s.order();
	std::map<int, PolyEnd> assign;
	for (int m = 0; m <= k; ++m)
		assign.emplace(m + 2, pair_to_end(s.level(m)));
	const auto alg = poly_end_algebra(space);
	std::vector<SymPairTensor> parts;
	for (int l = 1; l <= k + 2; ++l) {
		PolyEnd e = evaluate(q_of(l) * (Rational(1) / factorial(l)), assign, alg);
		parts.push_back(end_to_pair(e, l));
	}
	return PolyMetric::unchecked(space, std::move(parts));
}

/// Rank-2 series with component (i, j) read as the matrix entry of an
/// End(V)-valued polynomial.
inline PolyEnd series_to_poly_end(const Space &space, const SeriesTensor &t)
{
	const int n = space.n();
	if (t.rank() != 2 || t.n() != n)
		throw std::invalid_argument("series_to_poly_end: expected an n x n matrix series");
	const MonomialIndex &mi = MonomialIndex::get(n, t.order());
	PolyEnd out(space);
	for (std::size_t m = 0; m < mi.size(); ++m) {
		RatMatrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
		for (std::size_t o = 0; o < t.size(); ++o)
			a(o / static_cast<std::size_t>(n), o % static_cast<std::size_t>(n)) = t[o][m];
		Index mono;
		for (int v = 0; v < n; ++v)
			mono.insert(mono.end(), static_cast<std::size_t>(mi.exponents(m)[static_cast<std::size_t>(v)]), v);
		out.add_term(std::move(mono), a);
	}
	return out;
}

/// Sum_j Gamma^i_{jk}(xi) xi^j as a matrix series, truncated at K.
inline SeriesTensor radial_christoffel(const SeriesTensor &gamma, int K)
{
	const int n = gamma.n();
	const auto N = static_cast<std::size_t>(n);
	SeriesTensor out(n, 2, K);
	for (int i = 0; i < n; ++i)
		for (int k = 0; k < n; ++k)
			for (int j = 0; j < n; ++j)
				Series::add_product(out[static_cast<std::size_t>(i * n + k)],
				                    gamma[(static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)],
				                    Series::variable(n, K, j));
	return out;
}

/// Gamma(xi)(xi, xi) as a vector series; zero in normal coordinates.
inline SeriesTensor radial_geodesic_defect(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	const SeriesTensor gx = radial_christoffel(christoffel_series(g, K), K + 1);
	SeriesTensor out(n, 1, K + 2);
	for (int i = 0; i < n; ++i)
		for (int k = 0; k < n; ++k)
			Series::add_product(out[static_cast<std::size_t>(i)], gx[static_cast<std::size_t>(i * n + k)], Series::variable(n, K + 2, k));
	return out;
}

/// Backwards parallel transport Phi^{-1}(xi) along t -> t xi, truncated at
/// total degree K: U(0) = Id, U' = U Gamma(t xi)(xi, .).
inline SeriesTensor parallel_transport_series(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	SeriesTensor u(n, 2, K);
	for (int a = 0; a < n; ++a)
		u[static_cast<std::size_t>(a * n + a)][0] = 1;
	if (K == 0)
		return u;
	const SeriesTensor gx = radial_christoffel(christoffel_series(g, K - 1), K);
	for (int p = 0; p < K; ++p) {
		SeriesTensor prod = matmul(u, gx, p + 1);
		const Rational inv(1, p + 1);
		for (std::size_t o = 0; o < u.size(); ++o)
			u[o] += (prod[o].part(p + 1) * inv).reordered(K);
	}
	return u;
}

/// U^T eta U, truncated at K.
inline SeriesTensor transport_metric(const Space &space, const SeriesTensor &u, int K)
{
	const int n = space.n();
	SeriesTensor etau(n, 2, K);
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			etau[static_cast<std::size_t>(a * n + b)] = u[static_cast<std::size_t>(a * n + b)].reordered(K) * Rational(space.eps(a));
	SeriesTensor ut(n, 2, K);
	for (int a = 0; a < n; ++a)
		for (int b = 0; b < n; ++b)
			ut[static_cast<std::size_t>(a * n + b)] = u[static_cast<std::size_t>(b * n + a)].reordered(K);
	return matmul(ut, etau, K);
}

/// Jacobi equation along t -> t xi for Y(t) = t e_c, in the encoding where a
/// function of t with t^p-coefficient homogeneous of degree p in xi is
/// identified with the sum of its coefficients. Entry (i, c) is the i-th
/// component of D^2 Y + R(Y, gamma') gamma', times t; zero through degree K.
inline SeriesTensor jacobi_residual(const PolyMetric &g, int K)
{
	const int n = g.space().n();
	const auto N = static_cast<std::size_t>(n);
	const SeriesTensor gamma = christoffel_series(g, K);
	const SeriesTensor gx = radial_christoffel(gamma, K);
	SeriesTensor dy = gx; // DY = Id + Gamma(xi)(xi, .)
	for (int a = 0; a < n; ++a)
		dy[static_cast<std::size_t>(a * n + a)][0] += 1;
	SeriesTensor res = matmul(gx, dy, K);
	for (std::size_t o = 0; o < res.size(); ++o)
		res[o] += dy[o].euler();
	if (K >= 2) {
		const SeriesTensor rm = curvature_endomorphism_series(christoffel_series(g, K - 1), K - 2);
		for (int i = 0; i < n; ++i)
			for (int c = 0; c < n; ++c)
				for (int j = 0; j < n; ++j)
					for (int k = 0; k < n; ++k) {
						const Series &r = rm[((static_cast<std::size_t>(i) * N + static_cast<std::size_t>(c)) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)];
						Series xx = Series::variable(n, K, j) * Series::variable(n, K, k);
						Series::add_product(res[static_cast<std::size_t>(i * n + c)], r, xx);
					}
	}
	return res;
}

// ---------------------------------------------------------------------------
// Examples and random data.

/// S_0 = polarization of kappa(<xi,xi><x,y> - <x,xi><xi,y>), S_l = 0 for l >= 1.
inline SymJet const_curvature_symjet(const Space &space, const Rational &kappa, int k)
{
	SymJet s(space, k);
	SymPairTensor &s0 = s.level(0);
	const int n = space.n();
	auto ip = [&](int a, int b) { return a == b ? Rational(space.eps(a)) : Rational(); };
	for (int p = 0; p < n; ++p)
		for (int q = p; q < n; ++q)
			for (int a = 0; a < n; ++a)
				for (int b = a; b < n; ++b) {
					Rational v = ip(p, q) * ip(a, b) - Rational(1, 2) * (ip(a, p) * ip(q, b) + ip(a, q) * ip(p, b));
					s0.at({p, q}, a, b) = kappa * v;
				}
	return s;
}

/// Integer combination of the N_k basis with coefficients in [-box, box].
inline SymPairTensor random_n_element(const Space &space, int k, std::mt19937_64 &rng, int box)
{
	std::uniform_int_distribution<int> coef(-box, box);
	SymPairTensor h(space, k);
	for (const auto &b : n_basis(space, k)) {
		int c = coef(rng);
		if (c != 0)
			h += b * Rational(c);
	}
	return h;
}

inline SymJet random_symjet(const Space &space, int k, std::mt19937_64 &rng, int box = 3)
{
	std::vector<SymPairTensor> levels;
	for (int l = 0; l <= k; ++l)
		levels.push_back(random_n_element(space, l + 2, rng, box));
	return SymJet(space, std::move(levels));
}

/// Normal-coordinate metric with random parts h_2..h_degree (h_1 = 0, N_1 = 0).
inline PolyMetric random_normal_metric(const Space &space, int degree, std::mt19937_64 &rng, int box = 3)
{
	std::vector<SymPairTensor> parts;
	for (int l = 1; l <= degree; ++l)
		parts.push_back(l == 1 ? SymPairTensor(space, 1) : random_n_element(space, l, rng, box));
	return make_normal_metric(space, std::move(parts));
}

// ---------------------------------------------------------------------------
// Jets from symmetrized jets, and extension.

/// The curvature jet of the Taylor metric of s; its symmetrization is s.
inline CurvatureJet jet_from_symjet(const SymJet &s)
{
	return curvature_jet_at_origin(metric_from_symjet(s), s.order());
}

/// Canonical extension to order k+1: the jet whose symmetrization is that of j
/// padded with S_{k+1} = 0.
inline CurvatureJet extend_jet(const CurvatureJet &j)
{
	SymJet s = symmetrize_jet(j);
	return jet_from_symjet(s.resized(j.order() + 1));
}

} // namespace jetiso
