#include <random>

#include <gtest/gtest.h>

#include "jetiso/metriclab.hpp"
#include "jetiso/poly_end.hpp"
#include "jetiso/tensor.hpp"

using namespace jetiso;

namespace {

RatVector random_vector(std::mt19937_64 &rng, int n)
{
	std::uniform_int_distribution<int> d(-5, 5);
	RatVector v(static_cast<std::size_t>(n));
	for (auto &x : v)
		x = Rational(d(rng), 1 + std::abs(d(rng)));
	return v;
}

SymPairTensor random_pair_tensor(std::mt19937_64 &rng, const Space &space, int k)
{
	std::uniform_int_distribution<int> d(-3, 3);
	SymPairTensor h(space, k);
	for (auto &c : h.components())
		c = d(rng);
	return h;
}

} // namespace

TEST(Multiset, RankIsBijective)
{
	for (int n = 1; n <= 4; ++n)
		for (int k = 0; k <= 4; ++k) {
			MultisetSpace ms(n, k);
			EXPECT_EQ(ms.size(), multiset_count(n, k));
			for (std::size_t r = 0; r < ms.size(); ++r) {
				EXPECT_EQ(ms.rank(ms[r]), r);
				Index rev(ms[r].rbegin(), ms[r].rend());
				EXPECT_EQ(ms.rank(rev), r);
			}
		}
	EXPECT_EQ(multinomial({0, 0, 1}), Rational(3));
	EXPECT_EQ(distinct_permutations({1, 0, 1}).size(), 3u);
}

TEST(Space, RejectsBadSignatures)
{
	EXPECT_THROW(Space(std::vector<int>{1}), std::invalid_argument);
	EXPECT_THROW(Space(std::vector<int>{1, 2}), std::invalid_argument);
	Space s({-1, 1, 1});
	EXPECT_EQ(s.inner(basis_vector(3, 0), basis_vector(3, 0)), Rational(-1));
}

TEST(Polarization, RoundTrip)
{
	std::mt19937_64 rng(3);
	const Space space = Space::euclidean(3);
	for (int k = 0; k <= 4; ++k) {
		SymPairTensor h = random_pair_tensor(rng, space, k);
		HomPoly p = pair_polynomial(h);
		EXPECT_EQ(pair_tensor_from_polynomial(space, p), h);
		SymMultilinear b = polarize(p);
		EXPECT_EQ(restrict_to_diagonal(b), p);
		// B(xi, ..., xi) = p(xi)
		RatVector xi = random_vector(rng, 3);
		EXPECT_EQ(b(std::vector<RatVector>(static_cast<std::size_t>(k), xi)), p(xi));
	}
}

TEST(NSpace, DimensionFormula)
{
	for (int n = 2; n <= 4; ++n)
		for (int k = 1; k <= (n == 4 ? 4 : 5); ++k) {
			auto basis = n_basis(Space::euclidean(n), k);
			EXPECT_EQ(static_cast<long>(basis.size()), dim_N(n, k)) << "n=" << n << " k=" << k;
			for (const auto &b : basis)
				EXPECT_TRUE(is_in_N(b));
		}
	EXPECT_EQ(dim_N(2, 2), 1);
	EXPECT_EQ(dim_N(3, 2), 6);
	EXPECT_EQ(dim_N(4, 2), 20);
	EXPECT_EQ(dim_N(3, 1), 0);
	EXPECT_EQ(dim_N(4, 3), 60);
	EXPECT_EQ(dim_C_lower(4, 1), 60);
	EXPECT_EQ(dim_C_lower(2, 0), 1);
	EXPECT_THROW(dim_N(1, 2), std::invalid_argument);
}

// h(xi, ..., xi; xi, e_b) vanishes at random points iff is_in_N.
TEST(NSpace, MembershipAgreesWithEvaluation)
{
	std::mt19937_64 rng(4);
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1})})
		for (int k = 2; k <= 4; ++k) {
			SymPairTensor inside = random_n_element(space, k, rng, 3);
			SymPairTensor outside = random_pair_tensor(rng, space, k);
			for (const SymPairTensor *h : {&inside, &outside}) {
				bool vanish = true;
				for (int t = 0; t < 6 && vanish; ++t) {
					RatVector xi = random_vector(rng, 3);
					for (int b = 0; b < 3; ++b)
						if (!eval_pair(*h, std::vector<RatVector>(static_cast<std::size_t>(k), xi), xi, basis_vector(3, b)).is_zero())
							vanish = false;
				}
				EXPECT_EQ(vanish, is_in_N(*h));
			}
			EXPECT_TRUE(is_in_N(inside));
		}
}

TEST(NSpace, SymmetricTensorNotInN)
{
	// h(x, y; z, w) = <x,y><z,w> + <x,z><y,w> + <x,w><y,z>, fully symmetric.
	const Space space = Space::euclidean(3);
	SymPairTensor h(space, 2);
	auto ip = [](int a, int b) { return a == b ? Rational(1) : Rational(); };
	for (int x = 0; x < 3; ++x)
		for (int y = x; y < 3; ++y)
			for (int z = 0; z < 3; ++z)
				for (int w = z; w < 3; ++w)
					h.at({x, y}, z, w) = ip(x, y) * ip(z, w) + ip(x, z) * ip(y, w) + ip(x, w) * ip(y, z);
	EXPECT_FALSE(is_in_N(h));
}

// kulkarni of the constant-curvature S_0 is 3 kappa (<a,c><b,d> - <b,c><a,d>).
TEST(Kulkarni, ConstantCurvature)
{
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1, 1})}) {
		const Rational kappa(2, 3);
		MultiTensor t = kulkarni(const_curvature_symjet(space, kappa, 0).level(0));
		DenseShape shape = t.shape();
		Index i(4, 0);
		auto ip = [&](int a, int b) { return a == b ? Rational(space.eps(a)) : Rational(); };
		do {
			Rational expect = Rational(3) * kappa * (ip(i[0], i[2]) * ip(i[1], i[3]) - ip(i[1], i[2]) * ip(i[0], i[3]));
			EXPECT_EQ(t.at(i), expect);
		} while (shape.next(i));
	}
}

TEST(SignedPermutation, TransformIsAction)
{
	std::mt19937_64 rng(9);
	const Space space({-1, 1, 1});
	SignedPermutation p = SignedPermutation::random(space, rng), q = SignedPermutation::random(space, rng);
	ASSERT_TRUE(p.preserves(space));
	// (p q) e_i = p(sign_q[i] e_{q[i]})
	SignedPermutation pq{std::vector<int>(3), std::vector<int>(3)};
	for (int i = 0; i < 3; ++i) {
		pq.perm[static_cast<std::size_t>(i)] = p.perm[static_cast<std::size_t>(q.perm[static_cast<std::size_t>(i)])];
		pq.sign[static_cast<std::size_t>(i)] = q.sign[static_cast<std::size_t>(i)] * p.sign[static_cast<std::size_t>(q.perm[static_cast<std::size_t>(i)])];
	}
	SymPairTensor h = random_pair_tensor(rng, space, 3);
	EXPECT_EQ(transform(p, transform(q, h)), transform(pq, h));
	EXPECT_THROW(transform(SignedPermutation{{1, 0, 2}, {1, 1, 1}}, h), std::invalid_argument);
}
