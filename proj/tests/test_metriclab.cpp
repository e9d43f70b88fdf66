#include <random>

#include <gtest/gtest.h>

#include "jetiso/metriclab.hpp"
#include "jetiso/verify.hpp"
#include "oracles.hpp"

using namespace jetiso;
using oracle::constant_curvature_tensor;
using oracle::sin_squared_coefficients;

namespace {

SeriesTensor identity_series(int n, int K)
{
	SeriesTensor id(n, 2, K);
	for (int a = 0; a < n; ++a)
		id[static_cast<std::size_t>(a * n + a)][0] = 1;
	return id;
}

} // namespace

TEST(Series, MonomialIndexIsGraded)
{
	MonomialIndex small(3, 2), big(3, 4);
	for (std::size_t i = 0; i < small.size(); ++i)
		EXPECT_EQ(big.index(small.exponents(i)), i);
	EXPECT_EQ(small.count(2), 10u);
	EXPECT_EQ(big.size(), 35u);
}

TEST(Series, ArithmeticTruncates)
{
	const int n = 2, K = 3;
	Series x = Series::variable(n, K, 0), y = Series::variable(n, K, 1);
	Series p = (x + y) * (x + y) * (x + y) * (x + y);
	EXPECT_TRUE(p.is_zero());
	Series q = (x + y) * (x - y);
	EXPECT_EQ(q.coefficient({2, 0}), Rational(1));
	EXPECT_EQ(q.coefficient({0, 2}), Rational(-1));
	EXPECT_TRUE(q.coefficient({1, 1}).is_zero());
	EXPECT_EQ(q.derivative(0), x.reordered(2) * Rational(2));
	EXPECT_EQ(q.euler(), q * Rational(2));
}

TEST(Metric, ConstantCurvatureMatchesClosedForm)
{
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1}), Space::euclidean(2)})
		for (const Rational &kappa : {Rational(1), Rational(-2, 3)}) {
			const int K = 6;
			PolyMetric g = metric_from_symjet(const_curvature_symjet(space, kappa, K - 2));
			EXPECT_EQ(g.series(K), oracle::constant_curvature_metric(space, kappa, K));
			EXPECT_TRUE(check_normal_gauge(g));
		}
	auto c = sin_squared_coefficients(4);
	EXPECT_EQ(c[1], Rational(-1, 3));
	EXPECT_EQ(c[2], Rational(2, 45));
	EXPECT_EQ(c[3], Rational(-1, 315));
}

TEST(Metric, ConstantCurvatureJetAtOrigin)
{
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1})}) {
		const Rational kappa(3, 2);
		PolyMetric g = metric_from_symjet(const_curvature_symjet(space, kappa, 2));
		CurvatureJet j = curvature_jet_at_origin(g, 2);
		EXPECT_EQ(j.level(0), constant_curvature_tensor(space, kappa));
		EXPECT_TRUE(j.level(1).is_zero());
		EXPECT_TRUE(j.level(2).is_zero());
	}
}

TEST(Metric, GaugeIsEnforced)
{
	// h_2(xi; x, y) = <xi, xi><x, y> is conformal, hence outside N_2.
	const Space space = Space::euclidean(3);
	SymPairTensor h(space, 2);
	for (int p = 0; p < 3; ++p)
		for (int a = 0; a < 3; ++a)
			h.at({p, p}, a, a) = 1;
	EXPECT_FALSE(is_in_N(h));
	try {
		make_normal_metric(space, {SymPairTensor(space, 1), h});
		FAIL() << "expected GaugeError";
	}
	catch (const GaugeError &e) {
		EXPECT_EQ(e.level(), 2);
	}
	EXPECT_FALSE(check_normal_gauge(PolyMetric::unchecked(space, {SymPairTensor(space, 1), h})));
	std::mt19937_64 rng(31);
	EXPECT_TRUE(check_normal_gauge(random_normal_metric(space, 4, rng)));
}

TEST(Metric, InverseSeries)
{
	std::mt19937_64 rng(32);
	for (const Space &space : {Space::euclidean(2), Space({-1, 1, 1})}) {
		const int K = 5;
		PolyMetric g = random_normal_metric(space, 4, rng);
		EXPECT_EQ(matmul(g.series(K), inverse_series(g, K), K), identity_series(space.n(), K));
	}
	// Scalar check in one direction: g_00 = 1 - xi_1^2/3 on the unit-curvature sphere
	// restricted to xi = (0, t) gives g^00 = 1/(1 - t^2/3) = 1 + t^2/3 + t^4/9.
	const Space e2 = Space::euclidean(2);
	SeriesTensor inv = inverse_series(metric_from_symjet(const_curvature_symjet(e2, Rational(1), 0)), 4);
	EXPECT_EQ(inv[0].coefficient({0, 2}), Rational(1, 3));
	EXPECT_EQ(inv[0].coefficient({0, 4}), Rational(1, 9));
}

TEST(Metric, ChristoffelSymbols)
{
	std::mt19937_64 rng(33);
	const Space space = Space::euclidean(3);
	EXPECT_TRUE(christoffel_series(PolyMetric(space), 3).is_zero());
	PolyMetric g = random_normal_metric(space, 4, rng);
	SeriesTensor gamma = christoffel_series(g, 3);
	for (int i = 0; i < 3; ++i)
		for (int j = 0; j < 3; ++j)
			for (int k = 0; k < 3; ++k) {
				EXPECT_EQ(gamma.at({i, j, k}), gamma.at({i, k, j}));
				EXPECT_TRUE(gamma.at({i, j, k})[0].is_zero());
			}
	EXPECT_TRUE(radial_geodesic_defect(g, 4).is_zero());
}

TEST(Metric, RoundTripsThroughSymmetrizedJets)
{
	std::mt19937_64 rng(34);
	for (const Space &space : {Space::euclidean(2), Space::euclidean(3), Space({-1, 1, 1})})
		for (int k = 0; k <= 3; ++k) {
			std::string detail;
			EXPECT_TRUE(check_symjet_roundtrip(random_symjet(space, k, rng), detail)) << detail;
			EXPECT_TRUE(check_metric_roundtrip(random_normal_metric(space, k + 2, rng), k, detail)) << detail;
		}
}

TEST(Metric, JetFromSymjetInvertsSymmetrization)
{
	std::mt19937_64 rng(35);
	for (int k = 0; k <= 2; ++k) {
		CurvatureJet j = curvature_jet_at_origin(random_normal_metric(Space::euclidean(3), k + 2, rng), k);
		std::string detail;
		EXPECT_TRUE(check_jet_injectivity(j, detail)) << detail;
	}
	SymJet bad(Space::euclidean(2), 0);
	bad.level(0).at({0, 0}, 0, 0) = 1;
	EXPECT_THROW(metric_from_symjet(bad), std::invalid_argument);
}

TEST(Transport, ConstantCurvatureSecondOrder)
{
	// U = Id - (1/6) R(., xi) xi + O(|xi|^3) on the round sphere; with
	// <R(x, xi) xi, y> = <xi,xi><x,y> - <x,xi><xi,y>.
	const Space space = Space::euclidean(3);
	PolyMetric g = metric_from_symjet(const_curvature_symjet(space, Rational(1), 1));
	SeriesTensor u = parallel_transport_series(g, 2);
	EXPECT_EQ(u.at({0, 0}).coefficient({0, 1, 1}), Rational(0));
	EXPECT_EQ(u.at({0, 0}).coefficient({0, 2, 0}), Rational(-1, 6));
	EXPECT_EQ(u.at({0, 1}).coefficient({1, 1, 0}), Rational(1, 6));
	EXPECT_EQ(u.at({0, 0}).coefficient({0, 0, 0}), Rational(1));
}

TEST(Transport, ExpansionFactorizationAndJacobi)
{
	std::mt19937_64 rng(36);
	for (const Space &space : {Space::euclidean(2), Space::euclidean(3), Space({-1, 1})})
		for (int K = 0; K <= (space.n() == 3 ? 4 : 5); ++K) {
			PolyMetric g = random_normal_metric(space, K, rng);
			std::string detail;
			EXPECT_TRUE(check_transport_expansion(g, K, detail)) << detail;
			EXPECT_TRUE(check_transport_factorization(g, K, detail)) << detail;
			EXPECT_TRUE(check_jacobi(g, K, detail)) << detail;
		}
}

TEST(Transport, ResidualsDetectBrokenMetrics)
{
	// Off-gauge metrics break the radial-geodesic property.
	const Space space = Space::euclidean(2);
	SymPairTensor h(space, 2);
	h.at({0, 0}, 0, 0) = 1;
	PolyMetric g = PolyMetric::unchecked(space, {SymPairTensor(space, 1), h});
	EXPECT_FALSE(radial_geodesic_defect(g, 3).is_zero());
}
