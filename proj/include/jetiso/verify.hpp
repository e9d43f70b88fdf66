#pragma once

/// \file
/// Property suites over the whole library, shared by the command-line tool and
/// the acceptance runner. Every check is an exact identity.

#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "freealg.hpp"
#include "jets.hpp"
#include "metriclab.hpp"
#include "poly_end.hpp"
#include "tensor.hpp"

namespace jetiso {

struct CheckResult
{
	std::string name;
	bool pass = false;
	std::string detail;
};

class Report
{
  public:
	void check(std::string name, bool pass, std::string detail = {})
	{
		results_.push_back({std::move(name), pass, std::move(detail)});
	}

	/// Runs fn and records an exception as a failure.
	void guarded(const std::string &name, const std::function<bool(std::string &)> &fn)
	{
		std::string detail;
		try {
			bool ok = fn(detail);
			check(name, ok, detail);
		}
		catch (const std::exception &e) {
			check(name, false, std::string("exception: ") + e.what());
		}
	}

	void merge(const Report &o) { results_.insert(results_.end(), o.results_.begin(), o.results_.end()); }

	const std::vector<CheckResult> &results() const { return results_; }
	std::size_t passed() const
	{
		std::size_t c = 0;
		for (const auto &r : results_)
			c += r.pass ? 1 : 0;
		return c;
	}
	std::size_t failed() const { return results_.size() - passed(); }
	bool ok() const { return failed() == 0; }

	void print(std::ostream &os) const
	{
		for (const auto &r : results_) {
			os << (r.pass ? "PASS " : "FAIL ") << r.name;
			if (!r.detail.empty())
				os << " (" << r.detail << ")";
			os << "\n";
		}
		os << "passed=" << passed() << " failed=" << failed() << "\n";
	}

  private:
	std::vector<CheckResult> results_;
};

struct VerifyOptions
{
	Space space = Space::euclidean(3);
	int max_k = 2;
	std::uint64_t seed = 1;
	int trials = 3;
	int box = 3;
};

// ---------------------------------------------------------------------------
// Free algebra tables.

inline FreeElement poly(std::initializer_list<std::pair<Word, Rational>> terms)
{
	FreeElement e;
	for (const auto &[w, c] : terms)
		e.add_term(w, c);
	return e;
}

inline bool check_q_table(std::string &detail)
{
	const std::vector<FreeElement> expected = {
	    FreeElement::unit(),
	    FreeElement(),
	    poly({{Word{2}, Rational(-2, 3)}}),
	    poly({{Word{3}, Rational(-1)}}),
	    poly({{Word{4}, Rational(-6, 5)}, {Word{2, 2}, Rational(16, 15)}}),
	    poly({{Word{5}, Rational(-4, 3)}, {Word{2, 3}, Rational(8, 3)}, {Word{3, 2}, Rational(8, 3)}}),
	};
	for (int k = 0; k <= 5; ++k)
		if (q_of(k) != expected[static_cast<std::size_t>(k)]) {
			detail = "Q_" + std::to_string(k) + " = " + q_of(k).to_text();
			return false;
		}
	return true;
}

inline bool check_qtilde_table(std::string &detail)
{
	const std::vector<FreeElement> expected = {
	    FreeElement(),
	    poly({{Word{2}, Rational(-1, 3)}}),
	    poly({{Word{3}, Rational(-1, 2)}}),
	    poly({{Word{4}, Rational(-3, 5)}, {Word{2, 2}, Rational(1, 5)}}),
	    poly({{Word{5}, Rational(-2, 3)}, {Word{2, 3}, Rational(1, 3)}, {Word{3, 2}, Rational(2, 3)}}),
	};
	for (int k = 1; k <= 5; ++k)
		if (qtilde_recursive(k) != expected[static_cast<std::size_t>(k - 1)]) {
			detail = "Q~_" + std::to_string(k) + " = " + qtilde_recursive(k).to_text();
			return false;
		}
	return true;
}

inline bool check_qtilde_closed_form(int kmax, std::string &detail)
{
	auto table = qtilde_table(kmax);
	for (int k = 1; k <= kmax; ++k)
		if (table[static_cast<std::size_t>(k + 1)] != qtilde_explicit(k)) {
			detail = "k=" + std::to_string(k);
			return false;
		}
	return true;
}

inline bool check_leading_coefficients(int kmax, std::string &detail)
{
	for (int k = 0; k <= kmax; ++k)
		if (leading_coeff(k + 2) != Rational(-2 * (k + 1), k + 3)) {
			detail = "k=" + std::to_string(k) + " got " + leading_coeff(k + 2).to_string();
			return false;
		}
	return true;
}

/// Coefficients of sum_{l<=5} Q_l/l! on the operator monomials of the
/// degree-five Taylor polynomial.
inline bool check_taylor_five(std::string &detail)
{
	const FreeElement expected = poly({{Word{}, Rational(1)},
	                                   {Word{2}, Rational(-1, 3)},
	                                   {Word{3}, Rational(-1, 6)},
	                                   {Word{4}, Rational(-1, 20)},
	                                   {Word{2, 2}, Rational(2, 45)},
	                                   {Word{5}, Rational(-1, 90)},
	                                   {Word{2, 3}, Rational(1, 45)},
	                                   {Word{3, 2}, Rational(1, 45)}});
	FreeElement got = taylor_formal(5);
	if (got != expected) {
		detail = got.to_text();
		return false;
	}
	return true;
}

inline Report verify_freealg(const VerifyOptions &)
{
	Report r;
	r.guarded("freealg.q_table_k0_5", check_q_table);
	r.guarded("freealg.qtilde_table_k1_5", check_qtilde_table);
	r.guarded("freealg.qtilde_recursive_equals_explicit_k1_10", [](std::string &d) { return check_qtilde_closed_form(10, d); });
	r.guarded("freealg.leading_coefficient_k0_8", [](std::string &d) { return check_leading_coefficients(8, d); });
	r.guarded("freealg.taylor_degree_five", check_taylor_five);
	r.guarded("freealg.q_homogeneous_and_star_invariant_k0_8", [](std::string &d) {
		for (int k = 0; k <= 8; ++k) {
			FreeElement q = q_of(k);
			if (!q.is_homogeneous(k) || star(q) != q) {
				d = "k=" + std::to_string(k);
				return false;
			}
		}
		return true;
	});
	return r;
}

// ---------------------------------------------------------------------------
// Linear jets.

inline std::string nk_label(const Space &space, int k)
{
	return "n=" + std::to_string(space.n()) + ",k=" + std::to_string(k);
}

inline bool check_dimensions(const Space &space, int k, std::string &detail)
{
	const int n = space.n();
	const std::size_t nb = n_basis(space, k + 2).size();
	const std::size_t cb = c_basis(space, k).size();
	const long dn = dim_N(n, k + 2), dc = dim_C_lower(n, k);
	detail = "dimN=" + std::to_string(dn) + " dimC_lower=" + std::to_string(dc) + " rankN=" + std::to_string(nb) +
	         " rankC=" + std::to_string(cb);
	return static_cast<long>(nb) == dn && dn == dc && static_cast<long>(cb) == dc;
}

/// reconstruct_linear o symmetrize on C_k, symmetrize o reconstruct_linear on N_{k+2}.
inline bool check_reconstruction(const Space &space, int k, std::string &detail)
{
	for (const auto &t : c_basis(space, k)) {
		SymPairTensor s = symmetrize_level(t.tensor);
		if (reconstruct_linear(s).tensor != t.tensor) {
			detail = "C_k element not reconstructed";
			return false;
		}
	}
	for (const auto &s : n_basis(space, k + 2)) {
		if (symmetrize_level(reconstruct_linear(s).tensor) != s) {
			detail = "N element not recovered";
			return false;
		}
	}
	return true;
}

/// (0, ..., 0, T) is a valid jet for T in c_basis and in the image of reconstruct_linear.
inline bool check_linear_jets_valid(const Space &space, int k, std::string &detail)
{
	auto linear_jet = [&](const MultiTensor &t) {
		CurvatureJet j(space, k);
		j.level(k) = t;
		return j;
	};
	for (const auto &t : c_basis(space, k)) {
		auto v = validate_jet(linear_jet(t.tensor));
		if (!v.empty()) {
			detail = v.front().to_string();
			return false;
		}
	}
	for (const auto &s : n_basis(space, k + 2)) {
		auto v = validate_jet(linear_jet(reconstruct_linear(s).tensor));
		if (!v.empty()) {
			detail = v.front().to_string();
			return false;
		}
	}
	return true;
}

inline Report verify_linear(const VerifyOptions &o)
{
	Report r;
	for (int k = 0; k <= o.max_k; ++k) {
		const std::string tag = nk_label(o.space, k);
		r.guarded("linear.dimensions[" + tag + "]", [&](std::string &d) { return check_dimensions(o.space, k, d); });
		r.guarded("linear.reconstruction[" + tag + "]", [&](std::string &d) { return check_reconstruction(o.space, k, d); });
		r.guarded("linear.jets_valid[" + tag + "]", [&](std::string &d) { return check_linear_jets_valid(o.space, k, d); });
	}
	return r;
}

// ---------------------------------------------------------------------------
// Young symmetrizer.

inline bool check_young_eigenvalue(const Space &space, int k, std::string &detail)
{
	const Rational c = hook_constant(k);
	for (const auto &t : c_basis(space, k))
		if (young_symmetrize(t.tensor) != t.tensor * c) {
			detail = "eigenvalue " + c.to_string() + " fails";
			return false;
		}
	detail = "c_k=" + c.to_string();
	return true;
}

inline bool check_young_kulkarni(const Space &space, int k, std::string &detail)
{
	const Rational f = -Rational(2) * factorial(k + 2);
	for (const auto &t : c_basis(space, k))
		if (young_symmetrize(t.tensor) != kulkarni(symmetrize_level(t.tensor)) * f) {
			detail = "mismatch";
			return false;
		}
	return true;
}

inline Report verify_young(const VerifyOptions &o)
{
	Report r;
	r.check("young.hook_constants_12_24_80", hook_constant(0) == 12 && hook_constant(1) == 24 && hook_constant(2) == 80);
	for (int k = 0; k <= o.max_k; ++k) {
		const std::string tag = nk_label(o.space, k);
		r.guarded("young.eigenvalue[" + tag + "]", [&](std::string &d) { return check_young_eigenvalue(o.space, k, d); });
		r.guarded("young.kulkarni_form[" + tag + "]", [&](std::string &d) { return check_young_kulkarni(o.space, k, d); });
	}
	return r;
}

// ---------------------------------------------------------------------------
// Round trips between metrics, jets and symmetrized jets.

inline bool check_symjet_roundtrip(const SymJet &s, std::string &detail)
{
	PolyMetric g = metric_from_symjet(s);
	if (!check_normal_gauge(g)) {
		detail = "Taylor metric leaves normal gauge";
		return false;
	}
	for (const auto &h : g.parts())
		if (!is_in_N(h)) {
			detail = "Taylor part of degree " + std::to_string(h.k()) + " not in N";
			return false;
		}
	CurvatureJet j = curvature_jet_at_origin(g, s.order());
	auto v = validate_jet(j);
	if (!v.empty()) {
		detail = v.front().to_string();
		return false;
	}
	if (symmetrize_jet(j) != s) {
		detail = "symmetrized jet differs";
		return false;
	}
	return true;
}

inline bool check_metric_roundtrip(const PolyMetric &g, int k, std::string &detail)
{
	CurvatureJet j = curvature_jet_at_origin(g, k);
	PolyMetric back = metric_from_symjet(symmetrize_jet(j));
	for (int l = 1; l <= k + 2; ++l)
		if (back.part(l) != g.part(l)) {
			detail = "part of degree " + std::to_string(l) + " differs";
			return false;
		}
	return true;
}

/// jet_from_symjet o symmetrize_jet = id on oracle jets.
inline bool check_jet_injectivity(const CurvatureJet &j, std::string &detail)
{
	if (jet_from_symjet(symmetrize_jet(j)) != j) {
		detail = "jet not recovered from its symmetrization";
		return false;
	}
	return true;
}

/// Adds +1 to one component at a time and expects the validator to object.
inline bool check_mutations_detected(const CurvatureJet &j, std::mt19937_64 &rng, int samples, std::string &detail)
{
	for (int s = 0; s < samples; ++s) {
		std::uniform_int_distribution<int> pick_level(0, j.order());
		const int l = pick_level(rng);
		std::uniform_int_distribution<std::size_t> pick(0, j.level(l).size() - 1);
		const std::size_t off = pick(rng);
		CurvatureJet m = j;
		m.level(l)[off] += 1;
		if (validate_jet(m).empty()) {
			detail = "mutation at level " + std::to_string(l) + " offset " + std::to_string(off) + " undetected";
			return false;
		}
	}
	return true;
}

inline bool check_extension(const CurvatureJet &j, std::string &detail)
{
	const int k = j.order();
	CurvatureJet ext = extend_jet(j);
	auto v = validate_jet(ext);
	if (!v.empty()) {
		detail = "metric route: " + v.front().to_string();
		return false;
	}
	if (ext.truncated(k) != j) {
		detail = "metric route does not truncate to the input";
		return false;
	}
	auto lin = extend_jet_linear(j);
	if (!lin) {
		detail = "linear route: inconsistent system";
		return false;
	}
	v = validate_jet(*lin);
	if (!v.empty()) {
		detail = "linear route: " + v.front().to_string();
		return false;
	}
	if (lin->truncated(k) != j) {
		detail = "linear route does not truncate to the input";
		return false;
	}
	if (!coordinates_in(c_basis(j.space(), k + 1), lin->level(k + 1) - ext.level(k + 1))) {
		detail = "routes differ outside C_{k+1}";
		return false;
	}
	return true;
}

inline bool check_equivariance(const CurvatureJet &j, std::mt19937_64 &rng, std::string &detail)
{
	SignedPermutation p = SignedPermutation::random(j.space(), rng);
	if (symmetrize_jet(transform(p, j)) != transform(p, symmetrize_jet(j))) {
		detail = "symmetrization not equivariant";
		return false;
	}
	return true;
}

/// Orders for which the linear extension solve stays small.
inline bool extension_affordable(const Space &space, int k)
{
	return (space.n() <= 2 && k <= 3) || (space.n() == 3 && k <= 2);
}

inline Report verify_roundtrip(const VerifyOptions &o)
{
	Report r;
	std::mt19937_64 rng(o.seed);
	for (int k = 0; k <= o.max_k; ++k)
		for (int t = 0; t < o.trials; ++t) {
			const std::string tag = "[" + nk_label(o.space, k) + ",trial=" + std::to_string(t) + "]";
			SymJet s = random_symjet(o.space, k, rng, o.box);
			r.guarded("roundtrip.symjet_to_metric_to_symjet" + tag, [&](std::string &d) { return check_symjet_roundtrip(s, d); });
			PolyMetric g = random_normal_metric(o.space, k + 2, rng, o.box);
			r.guarded("roundtrip.metric_to_jet_to_metric" + tag, [&](std::string &d) { return check_metric_roundtrip(g, k, d); });
			CurvatureJet j = curvature_jet_at_origin(g, k);
			r.guarded("roundtrip.oracle_jet_valid" + tag, [&](std::string &d) {
				auto v = validate_jet(j);
				if (!v.empty())
					d = v.front().to_string();
				return v.empty();
			});
			r.guarded("roundtrip.jet_injectivity" + tag, [&](std::string &d) { return check_jet_injectivity(j, d); });
			r.guarded("roundtrip.mutation_detected" + tag, [&](std::string &d) { return check_mutations_detected(j, rng, 4, d); });
			r.guarded("roundtrip.equivariance" + tag, [&](std::string &d) { return check_equivariance(j, rng, d); });
			if (extension_affordable(o.space, k))
				r.guarded("roundtrip.extension" + tag, [&](std::string &d) { return check_extension(j, d); });
		}
	return r;
}

// ---------------------------------------------------------------------------
// Backwards parallel transport and the Jacobi equation.

/// The transport series agrees with sum_{k<=K} Q~_k/k! evaluated on the
/// symmetrized jet of g.
inline bool check_transport_expansion(const PolyMetric &g, int K, std::string &detail)
{
	const Space &space = g.space();
	PolyEnd ode = series_to_poly_end(space, parallel_transport_series(g, K));
	std::map<int, PolyEnd> assign;
	if (K >= 2) {
		SymJet s = symmetrize_jet(curvature_jet_at_origin(g, K - 2));
		for (int m = 0; m <= s.order(); ++m)
			assign.emplace(m + 2, pair_to_end(s.level(m)));
	}
	PolyEnd formal = evaluate(transport_formal(K), assign, poly_end_algebra(space));
	if (ode != formal) {
		detail = "transport series differs from the universal expansion";
		return false;
	}
	return true;
}

inline bool check_transport_factorization(const PolyMetric &g, int K, std::string &detail)
{
	if (transport_metric(g.space(), parallel_transport_series(g, K), K) != g.series(K)) {
		detail = "U^T eta U differs from g";
		return false;
	}
	return true;
}

inline bool check_jacobi(const PolyMetric &g, int K, std::string &detail)
{
	if (!jacobi_residual(g, K).vanishes_through(K)) {
		detail = "Jacobi residual nonzero";
		return false;
	}
	if (!radial_geodesic_defect(g, K).is_zero()) {
		detail = "radial lines are not geodesics";
		return false;
	}
	return true;
}

inline Report verify_transport(const VerifyOptions &o)
{
	Report r;
	std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ULL);
	const int K = o.max_k + 2;
	for (int t = 0; t < o.trials; ++t) {
		const std::string tag = "[n=" + std::to_string(o.space.n()) + ",K=" + std::to_string(K) + ",trial=" + std::to_string(t) + "]";
		PolyMetric g = random_normal_metric(o.space, K, rng, o.box);
		r.guarded("transport.universal_expansion" + tag, [&](std::string &d) { return check_transport_expansion(g, K, d); });
		r.guarded("transport.metric_factorization" + tag, [&](std::string &d) { return check_transport_factorization(g, K, d); });
		r.guarded("transport.jacobi_equation" + tag, [&](std::string &d) { return check_jacobi(g, K, d); });
	}
	return r;
}

inline Report verify_suite(const std::string &suite, const VerifyOptions &o)
{
	if (suite == "freealg")
		return verify_freealg(o);
	if (suite == "linear")
		return verify_linear(o);
	if (suite == "young")
		return verify_young(o);
	if (suite == "roundtrip")
		return verify_roundtrip(o);
	if (suite == "transport")
		return verify_transport(o);
	if (suite == "all") {
		Report r;
		for (const char *s : {"freealg", "linear", "young", "roundtrip", "transport"})
			r.merge(verify_suite(s, o));
		return r;
	}
	throw std::invalid_argument("unknown suite \"" + suite + "\"");
}

} // namespace jetiso
