#include <random>

#include <gtest/gtest.h>

#include "jetiso/json_io.hpp"
#include "jetiso/metriclab.hpp"

using namespace jetiso;

TEST(Json, CurvatureJetRoundTrip)
{
	std::mt19937_64 rng(41);
	const Space space({-1, 1, 1});
	CurvatureJet j = curvature_jet_at_origin(random_normal_metric(space, 3, rng), 1);
	json doc = to_json(j);
	EXPECT_EQ(doc.at("kind"), "curvature_jet");
	EXPECT_EQ(jet_kind(doc), "curvature_jet");
	EXPECT_EQ(curvature_jet_from_json(json::parse(doc.dump())), j);
}

TEST(Json, SymJetAndMetricRoundTrip)
{
	std::mt19937_64 rng(42);
	const Space space = Space::euclidean(3);
	SymJet s = random_symjet(space, 2, rng);
	EXPECT_EQ(sym_jet_from_json(json::parse(to_json(s).dump())), s);
	EXPECT_EQ(jet_kind(to_json(s)), "sym_jet");
	PolyMetric g = metric_from_symjet(s);
	EXPECT_EQ(metric_from_json(json::parse(to_json(g).dump())), g);
}

TEST(Json, FreeElementAndTensors)
{
	FreeElement q = q_of(5);
	EXPECT_EQ(free_element_from_json(to_json(q)), q);
	std::mt19937_64 rng(43);
	SymPairTensor h = random_n_element(Space::euclidean(3), 3, rng, 2);
	EXPECT_EQ(sym_pair_from_json(to_json(h)), h);
	MultiTensor t(Space::euclidean(2), 3);
	t.at({0, 1, 1}) = Rational(-7, 4);
	EXPECT_EQ(multi_tensor_from_json(to_json(t)), t);
}

TEST(Json, LayoutWithoutKindIsRecognized)
{
	json doc = json::parse(R"({"n": 2, "order": 0, "levels": [{"k": 2, "components": [{"sym": [0, 0], "pair": [1, 1], "value": "1"}]}]})");
	EXPECT_EQ(jet_kind(doc), "sym_jet");
	SymJet s = sym_jet_from_json(doc);
	EXPECT_EQ(s.level(0).at({0, 0}, 1, 1), Rational(1));
	EXPECT_EQ(s.space(), Space::euclidean(2));
}

TEST(Json, ValuesAcceptIntegersAndFractionStrings)
{
	json doc = json::parse(R"({"n": 2, "order": 0, "levels": [{"components": [
	  {"idx": [0, 1, 1, 0], "value": 1}, {"idx": [1, 0, 0, 1], "value": "1"},
	  {"idx": [0, 1, 0, 1], "value": "-1"}, {"idx": [1, 0, 1, 0], "value": -1}]}]})");
	CurvatureJet j = curvature_jet_from_json(doc);
	EXPECT_EQ(j.level(0).at({0, 1, 1, 0}), Rational(1));
	EXPECT_TRUE(validate_jet(j).empty());
}

TEST(Json, MalformedInputRaisesParseError)
{
	const char *bad[] = {
	    R"({"order": 0, "levels": []})",
	    R"({"n": 1, "order": 0, "levels": [{"components": []}]})",
	    R"({"n": 2, "signature": [1, 2], "order": 0, "levels": [{"components": []}]})",
	    R"({"n": 2, "order": 1, "levels": [{"components": []}]})",
	    R"({"n": 2, "order": 0, "levels": [{"components": [{"idx": [0, 1, 2, 0], "value": "1"}]}]})",
	    R"({"n": 2, "order": 0, "levels": [{"components": [{"idx": [0, 1, 1], "value": "1"}]}]})",
	    R"({"n": 2, "order": 0, "levels": [{"components": [{"idx": [0, 1, 1, 0], "value": "x"}]}]})",
	    R"({"n": 2, "order": 0, "levels": [{"components": [{"idx": [0, 1, 1, 0], "value": "1/0"}]}]})",
	    R"({"n": 2, "order": 0, "levels": [{"arity": 5, "components": []}]})",
	};
	for (const char *text : bad)
		EXPECT_THROW(curvature_jet_from_json(json::parse(text)), ParseError) << text;
	EXPECT_THROW(sym_jet_from_json(json::parse(R"({"n": 2, "order": 0, "levels": [{"components": [{"sym": [1, 0], "pair": [0, 0], "value": "1"}]}]})")),
	             ParseError);
	EXPECT_THROW(metric_from_json(json::parse(R"({"n": 2, "parts": [{"degree": 0, "components": []}]})")), ParseError);
	EXPECT_THROW(jet_kind(json::parse(R"({"n": 2, "levels": []})")), ParseError);
	EXPECT_THROW(free_element_from_json(json::parse(R"([{"word": [1], "coeff": "1"}])")), ParseError);
}
