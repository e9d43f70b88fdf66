#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "jetiso/jets.hpp"
#include "jetiso/metriclab.hpp"
#include "jetiso/verify.hpp"
#include "oracles.hpp"

using namespace jetiso;
using oracle::constant_curvature_tensor;

namespace {

MultiTensor random_tensor(std::mt19937_64 &rng, const Space &space, int arity)
{
	std::uniform_int_distribution<int> d(-3, 3);
	MultiTensor t(space, arity);
	for (auto &c : t.components())
		c = d(rng);
	return t;
}

/// Nullspace of antisymmetry, pair symmetry and first Bianchi on all n^4 entries.
std::size_t brute_curvature_dimension(int n)
{
	const DenseShape shape(n, 4);
	RowReducer red(shape.size());
	Index i(4, 0);
	do {
		const int a = i[0], b = i[1], c = i[2], d = i[3];
		red.add_sparse_row({{shape.offset({a, b, c, d}), Rational(1)}, {shape.offset({b, a, c, d}), Rational(1)}});
		if (shape.offset({a, b, c, d}) != shape.offset({c, d, a, b}))
			red.add_sparse_row({{shape.offset({a, b, c, d}), Rational(1)}, {shape.offset({c, d, a, b}), Rational(-1)}});
		std::map<std::size_t, Rational> row;
		row[shape.offset({a, b, c, d})] += 1;
		row[shape.offset({b, c, a, d})] += 1;
		row[shape.offset({c, a, b, d})] += 1;
		SparseRow sparse;
		for (auto &[col, v] : row)
			if (!v.is_zero())
				sparse.emplace_back(col, v);
		if (!sparse.empty())
			red.add_sparse_row(sparse);
	} while (shape.next(i));
	return shape.size() - red.rank();
}

/// Young symmetrizer as an explicit sum over the row group (all permutations
/// of the long and short rows) and the four column permutations.
MultiTensor brute_young(const MultiTensor &t)
{
	const int k = t.arity() - 4;
	std::vector<int> long_row(static_cast<std::size_t>(k));
	std::iota(long_row.begin(), long_row.end(), 0);
	long_row.push_back(k);
	long_row.push_back(k + 2);
	const std::vector<int> short_row = {k + 1, k + 3};

	MultiTensor out(t.space(), t.arity());
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.arity()), 0);
	do {
		Rational total;
		for (int col = 0; col < 4; ++col) {
			Index w = idx;
			int sign = 1;
			if (col & 1) {
				std::swap(w[static_cast<std::size_t>(k)], w[static_cast<std::size_t>(k + 1)]);
				sign = -sign;
			}
			if (col & 2) {
				std::swap(w[static_cast<std::size_t>(k + 2)], w[static_cast<std::size_t>(k + 3)]);
				sign = -sign;
			}
			std::vector<int> sigma(long_row.size());
			std::iota(sigma.begin(), sigma.end(), 0);
			do {
				for (int s = 0; s < 2; ++s) {
					Index v = w;
					for (std::size_t q = 0; q < long_row.size(); ++q)
						v[static_cast<std::size_t>(long_row[q])] = w[static_cast<std::size_t>(long_row[static_cast<std::size_t>(sigma[q])])];
					if (s == 1)
						std::swap(v[static_cast<std::size_t>(short_row[0])], v[static_cast<std::size_t>(short_row[1])]);
					total += sign > 0 ? t.at(v) : -t.at(v);
				}
			} while (std::next_permutation(sigma.begin(), sigma.end()));
		}
		out.at(idx) = total;
	} while (shape.next(idx));
	return out;
}

CurvatureJet linear_jet(const MultiTensor &t)
{
	CurvatureJet j(t.space(), t.arity() - 4);
	j.level(j.order()) = t;
	return j;
}

} // namespace

TEST(CurvatureBasis, MatchesBruteForceDimension)
{
	for (int n = 2; n <= 4; ++n) {
		const Space space = Space::euclidean(n);
		auto basis = curvature_tensor_basis(space);
		EXPECT_EQ(basis.size(), brute_curvature_dimension(n));
		EXPECT_EQ(static_cast<long>(basis.size()), static_cast<long>(n * n * (n * n - 1) / 12));
		for (const auto &t : basis)
			EXPECT_TRUE(validate_curvature(t).empty());
	}
	EXPECT_EQ(brute_curvature_dimension(2), 1u);
	EXPECT_EQ(brute_curvature_dimension(3), 6u);
	EXPECT_EQ(brute_curvature_dimension(4), 20u);
}

TEST(CurvatureBasis, ConstantCurvatureHasUnitSectional)
{
	MultiTensor r = constant_curvature_tensor(Space::euclidean(3), Rational(1));
	EXPECT_EQ(r.at({0, 1, 1, 0}), Rational(1));
	EXPECT_TRUE(validate_curvature(r).empty());
	EXPECT_TRUE(coordinates_in(c_basis(Space::euclidean(3), 0), r).has_value());
}

TEST(Validator, MetricTensorProductFailsAntisymmetry)
{
	const Space space = Space::euclidean(3);
	MultiTensor gg(space, 4);
	DenseShape shape = gg.shape();
	Index i(4, 0);
	do
		gg.at(i) = (i[0] == i[1] && i[2] == i[3]) ? Rational(1) : Rational();
	while (shape.next(i));
	auto v = validate_curvature(gg);
	ASSERT_FALSE(v.empty());
	EXPECT_EQ(v.front().identity, "antisymmetry");
	EXPECT_EQ(v.front().level, 0);
	EXPECT_EQ(v.front().magnitude, Rational(2)); // R(a,a,c,c) + R(a,a,c,c)
}

TEST(Validator, ConstantCurvaturePaddedWithZeroIsValid)
{
	const Space space({-1, 1, 1});
	CurvatureJet j(space, 1);
	j.level(0) = constant_curvature_tensor(space, Rational(-2));
	EXPECT_TRUE(validate_jet(j).empty());
}

TEST(Validator, AntisymmetricSecondDerivativeViolatesRicci)
{
	// T_2(x, y; a, b, c, d) = (x ^ y) R(a, b, c, d) on a flat background.
	const Space space = Space::euclidean(2);
	const MultiTensor r = constant_curvature_tensor(space, Rational(1));
	CurvatureJet j(space, 2);
	DenseShape shape = j.level(2).shape();
	Index i(6, 0);
	do {
		int alt = (i[0] == 0 && i[1] == 1) ? 1 : (i[0] == 1 && i[1] == 0) ? -1 : 0;
		j.level(2).at(i) = Rational(alt) * r.at({i[2], i[3], i[4], i[5]});
	} while (shape.next(i));
	auto v = validate_jet(j);
	ASSERT_EQ(v.size(), 1u);
	EXPECT_EQ(v.front().identity, "ricci");
	EXPECT_EQ(v.front().level, 2);
	EXPECT_EQ(v.front().slots, std::make_pair(1, 2));
	EXPECT_EQ(v.front().to_string().rfind("level=2 identity=ricci slots=(1,2) max_violation_at=[", 0), 0u);
}

// At level 2 the identity reads T(x,y;.) - T(y,x;.) = (R(x,y).R)(a,b,c,d)
// with R(x,y) acting as a derivation.
TEST(Validator, RicciDefectAtLevelTwoMatchesDirectFormula)
{
	std::mt19937_64 rng(21);
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1})}) {
		const int n = space.n();
		CurvatureJet j(space, 2);
		auto basis = curvature_tensor_basis(space);
		for (std::size_t b = 0; b < basis.size(); ++b)
			j.level(0) += basis[b] * Rational(static_cast<long>(rng() % 5) - 2);
		j.level(2) = random_tensor(rng, space, 6);
		const MultiTensor &r = j.level(0);
		MultiTensor defect = ricci_defect(j, 2, 1);
		DenseShape shape = defect.shape();
		Index i(6, 0);
		do {
			const int x = i[0], y = i[1];
			Index abcd(i.begin() + 2, i.end());
			Rational act;
			for (int slot = 0; slot < 4; ++slot)
				for (int m = 0; m < n; ++m) {
					Index w = abcd;
					w[static_cast<std::size_t>(slot)] = m;
					// R(x,y) z = sum_m eps_m R(x, y, z, e_m) e_m
					act -= Rational(space.eps(m)) * r.at({x, y, abcd[static_cast<std::size_t>(slot)], m}) * r.at(w);
				}
			Rational expect = j.level(2).at(i) - j.level(2).at({y, x, i[2], i[3], i[4], i[5]}) - act;
			EXPECT_EQ(defect.at(i), expect);
		} while (shape.next(i));
	}
}

TEST(Validator, OracleJetsAreValidAndMutationsAreCaught)
{
	std::mt19937_64 rng(22);
	const Space space = Space::euclidean(2);
	PolyMetric g = random_normal_metric(space, 3, rng);
	CurvatureJet j = curvature_jet_at_origin(g, 1);
	ASSERT_TRUE(validate_jet(j).empty());
	for (int l = 0; l <= j.order(); ++l)
		for (std::size_t off = 0; off < j.level(l).size(); ++off) {
			CurvatureJet m = j;
			m.level(l)[off] += 1;
			EXPECT_FALSE(validate_jet(m).empty()) << "level " << l << " offset " << off;
		}
}

TEST(Young, HookConstants)
{
	EXPECT_EQ(hook_constant(0), 12);
	EXPECT_EQ(hook_constant(1), 24);
	EXPECT_EQ(hook_constant(2), 80);
	EXPECT_EQ(hook_constant(3), 360);
	EXPECT_THROW(hook_constant(-1), std::invalid_argument);
}

TEST(Young, MatchesFullGroupSum)
{
	std::mt19937_64 rng(23);
	for (int n = 2; n <= 3; ++n)
		for (int k = 0; k <= (n == 2 ? 3 : 2); ++k) {
			MultiTensor t = random_tensor(rng, Space::euclidean(n), k + 4);
			EXPECT_EQ(young_symmetrize(t), brute_young(t)) << "n=" << n << " k=" << k;
		}
}

TEST(Young, EigenvalueOnLinearJets)
{
	for (int n = 2; n <= 3; ++n)
		for (int k = 0; k <= 3; ++k) {
			std::string detail;
			EXPECT_TRUE(check_young_eigenvalue(Space::euclidean(n), k, detail)) << detail;
			EXPECT_TRUE(check_young_kulkarni(Space::euclidean(n), k, detail)) << detail;
		}
}

TEST(LinearJets, BasisDimensionsAndValidity)
{
	for (int n = 2; n <= 4; ++n)
		for (int k = 0; k <= (n == 4 ? 1 : 3); ++k) {
			const Space space = Space::euclidean(n);
			auto basis = c_basis(space, k);
			EXPECT_EQ(static_cast<long>(basis.size()), dim_N(n, k + 2));
			for (const auto &t : basis) {
				EXPECT_EQ(t.order(), k);
				EXPECT_TRUE(validate_jet(linear_jet(t.tensor)).empty());
			}
		}
}

TEST(LinearJets, ReconstructionInvertsSymmetrization)
{
	std::mt19937_64 rng(24);
	for (const Space &space : {Space::euclidean(2), Space::euclidean(3), Space({-1, 1, 1}), Space::euclidean(4)})
		for (int k = 0; k <= (space.n() == 4 ? 1 : 3); ++k) {
			SymPairTensor s = random_n_element(space, k + 2, rng, 3);
			LinearJetComponent t = reconstruct_linear(s);
			EXPECT_EQ(symmetrize_level(t.tensor), s);
			EXPECT_TRUE(validate_jet(linear_jet(t.tensor)).empty());
			EXPECT_EQ(t.tensor, kulkarni(s) * Rational(-(k + 1), k + 3));
		}
	SymPairTensor bad(Space::euclidean(2), 2);
	bad.at({0, 0}, 0, 0) = 1;
	EXPECT_THROW(reconstruct_linear(bad), std::invalid_argument);
}

TEST(LinearJets, SymmetrizationOfConstantCurvature)
{
	// S_0(xi; x, y) = R(x, xi, xi, y) = kappa (<xi,xi><x,y> - <x,xi><xi,y>)
	const Space space = Space::euclidean(3);
	SymPairTensor s = symmetrize_level(constant_curvature_tensor(space, Rational(1)));
	EXPECT_EQ(s, const_curvature_symjet(space, Rational(1), 0).level(0));
	EXPECT_EQ(s.at({0, 0}, 1, 1), Rational(1));
	EXPECT_EQ(s.at({0, 1}, 0, 1), Rational(-1, 2));
}

TEST(Extension, BothRoutesAgreeModuloLinearJets)
{
	std::mt19937_64 rng(25);
	for (const Space &space : {Space::euclidean(2), Space::euclidean(3), Space({-1, 1})})
		for (int k = 0; k <= (space.n() == 3 ? 1 : 2); ++k) {
			PolyMetric g = random_normal_metric(space, k + 2, rng);
			CurvatureJet j = curvature_jet_at_origin(g, k);
			std::string detail;
			EXPECT_TRUE(check_extension(j, detail)) << detail;
		}
}

TEST(Extension, ZeroJetExtendsToZero)
{
	CurvatureJet z(Space::euclidean(3), 1);
	EXPECT_EQ(extend_jet(z), CurvatureJet(Space::euclidean(3), 2));
	auto lin = extend_jet_linear(z);
	ASSERT_TRUE(lin.has_value());
	EXPECT_TRUE(validate_jet(*lin).empty());
}

TEST(Extension, RejectsInvalidInput)
{
	CurvatureJet j(Space::euclidean(2), 0);
	j.level(0).at({0, 0, 0, 0}) = 1;
	EXPECT_THROW(extend_jet_linear(j), std::invalid_argument);
	EXPECT_THROW(symmetrize_jet(j), std::invalid_argument);
}

TEST(Equivariance, SignedPermutationsCommuteWithSymmetrization)
{
	std::mt19937_64 rng(26);
	for (const Space &space : {Space::euclidean(3), Space({-1, 1, 1})}) {
		CurvatureJet j = curvature_jet_at_origin(random_normal_metric(space, 4, rng), 2);
		for (int t = 0; t < 4; ++t) {
			std::string detail;
			EXPECT_TRUE(check_equivariance(j, rng, detail)) << detail;
			EXPECT_TRUE(validate_jet(transform(SignedPermutation::random(space, rng), j)).empty());
		}
	}
}

TEST(Jets, TruncationAndShapes)
{
	CurvatureJet j(Space::euclidean(2), 3);
	EXPECT_EQ(j.truncated(1).order(), 1);
	EXPECT_THROW(j.truncated(4), std::invalid_argument);
	EXPECT_THROW(CurvatureJet(Space::euclidean(2), std::vector<MultiTensor>{MultiTensor(Space::euclidean(2), 5)}),
	             std::invalid_argument);
	SymJet s(Space::euclidean(2), 1);
	EXPECT_EQ(s.resized(3).order(), 3);
	EXPECT_FALSE(s.first_invalid_level().has_value());
	s.level(1).at({0, 0, 0}, 0, 0) = 1;
	EXPECT_EQ(s.first_invalid_level(), std::optional<int>(1));
}
