#pragma once

/// \file
/// JSON encodings of free-algebra elements, tensors, jets, metrics and series.
/// Rationals are strings "p/q" or "p"; zero components are omitted on output
/// and default to zero on input.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "freealg.hpp"
#include "jets.hpp"
#include "metriclab.hpp"
#include "series.hpp"
#include "tensor.hpp"

namespace jetiso {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent input document.
class ParseError : public std::runtime_error
{
  public:
	using std::runtime_error::runtime_error;
};

namespace detail {

inline const json &require(const json &j, const char *key, const std::string &where)
{
	if (!j.is_object() || !j.contains(key))
		throw ParseError(where + ": missing field \"" + key + "\"");
	return j.at(key);
}

inline int require_int(const json &j, const char *key, const std::string &where)
{
	const json &v = require(j, key, where);
	if (!v.is_number_integer())
		throw ParseError(where + ": field \"" + key + "\" must be an integer");
	return v.get<int>();
}

inline Rational parse_value(const json &v, const std::string &where)
{
	try {
		if (v.is_string())
			return Rational::parse(v.get<std::string>());
		if (v.is_number_integer())
			return Rational(v.get<long long>());
	}
	catch (const std::exception &e) {
		throw ParseError(where + ": bad rational: " + e.what());
	}
	throw ParseError(where + ": value must be a rational string or an integer");
}

inline Index parse_index(const json &v, int n, std::size_t length, const std::string &where)
{
	if (!v.is_array() || v.size() != length)
		throw ParseError(where + ": index must be an array of length " + std::to_string(length));
	Index idx;
	for (const auto &x : v) {
		if (!x.is_number_integer())
			throw ParseError(where + ": index entries must be integers");
		int i = x.get<int>();
		if (i < 0 || i >= n)
			throw ParseError(where + ": index entry " + std::to_string(i) + " out of range [0," + std::to_string(n) + ")");
		idx.push_back(i);
	}
	return idx;
}

inline json index_json(const Index &idx)
{
	json a = json::array();
	for (int i : idx)
		a.push_back(i);
	return a;
}

} // namespace detail

// ---------------------------------------------------------------------------

inline json to_json(const Space &space)
{
	json s = json::array();
	for (int e : space.signature())
		s.push_back(e);
	return s;
}

/// Reads "n" and "signature" (default Euclidean).
inline Space space_from_json(const json &j, const std::string &where)
{
	const int n = detail::require_int(j, "n", where);
	if (n < 2)
		throw ParseError(where + ": n must be at least 2");
	if (!j.contains("signature"))
		return Space::euclidean(n);
	const json &sig = j.at("signature");
	if (!sig.is_array() || static_cast<int>(sig.size()) != n)
		throw ParseError(where + ": signature must be an array of length n");
	std::vector<int> s;
	for (const auto &x : sig) {
		if (!x.is_number_integer() || (x.get<int>() != 1 && x.get<int>() != -1))
			throw ParseError(where + ": signature entries must be 1 or -1");
		s.push_back(x.get<int>());
	}
	return Space(s);
}

inline json to_json(const FreeElement &e)
{
	json a = json::array();
	for (const auto &[w, c] : e.terms())
		a.push_back({{"word", detail::index_json(w.letters())}, {"coeff", c.to_string()}});
	return a;
}

inline FreeElement free_element_from_json(const json &j)
{
	if (!j.is_array())
		throw ParseError("free element: expected an array of terms");
	FreeElement e;
	for (const auto &t : j) {
		const json &w = detail::require(t, "word", "free element");
		if (!w.is_array())
			throw ParseError("free element: word must be an array");
		std::vector<int> letters;
		for (const auto &x : w) {
			if (!x.is_number_integer())
				throw ParseError("free element: letters must be integers");
			letters.push_back(x.get<int>());
		}
		try {
			e.add_term(Word(letters), detail::parse_value(detail::require(t, "coeff", "free element"), "free element"));
		}
		catch (const std::invalid_argument &err) {
			throw ParseError(std::string("free element: ") + err.what());
		}
	}
	return e;
}

// ---------------------------------------------------------------------------

inline json components_json(const SymPairTensor &h)
{
	json comps = json::array();
	const auto &ms = h.sym_space();
	const auto &ps = h.pair_space();
	for (std::size_t r = 0; r < ms.size(); ++r)
		for (std::size_t q = 0; q < ps.size(); ++q) {
			const Rational &v = h.at_rank(r, q);
			if (!v.is_zero())
				comps.push_back({{"sym", detail::index_json(ms[r])}, {"pair", detail::index_json(ps[q])}, {"value", v.to_string()}});
		}
	return comps;
}

inline void read_components(SymPairTensor &h, const json &comps, const std::string &where)
{
	if (!comps.is_array())
		throw ParseError(where + ": components must be an array");
	for (const auto &c : comps) {
		Index sym = detail::parse_index(detail::require(c, "sym", where), h.n(), static_cast<std::size_t>(h.k()), where + " sym");
		Index pair = detail::parse_index(detail::require(c, "pair", where), h.n(), 2, where + " pair");
		if (!std::is_sorted(sym.begin(), sym.end()))
			throw ParseError(where + ": sym index must be non-decreasing");
		h.at(sym, pair[0], pair[1]) = detail::parse_value(detail::require(c, "value", where), where);
	}
}

inline json to_json(const SymPairTensor &h)
{
	return {{"n", h.n()}, {"signature", to_json(h.space())}, {"k", h.k()}, {"components", components_json(h)}};
}

inline SymPairTensor sym_pair_from_json(const json &j)
{
	Space space = space_from_json(j, "tensor");
	const int k = detail::require_int(j, "k", "tensor");
	if (k < 0)
		throw ParseError("tensor: k must be >= 0");
	SymPairTensor h(space, k);
	read_components(h, detail::require(j, "components", "tensor"), "tensor");
	return h;
}

inline json components_json(const MultiTensor &t)
{
	json comps = json::array();
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.arity()), 0);
	std::size_t off = 0;
	do {
		const Rational &v = t[off++];
		if (!v.is_zero())
			comps.push_back({{"idx", detail::index_json(idx)}, {"value", v.to_string()}});
	} while (shape.next(idx));
	return comps;
}

inline void read_components(MultiTensor &t, const json &comps, const std::string &where)
{
	if (!comps.is_array())
		throw ParseError(where + ": components must be an array");
	for (const auto &c : comps) {
		Index idx = detail::parse_index(detail::require(c, "idx", where), t.n(), static_cast<std::size_t>(t.arity()), where + " idx");
		t.at(idx) = detail::parse_value(detail::require(c, "value", where), where);
	}
}

inline json to_json(const MultiTensor &t)
{
	return {{"n", t.n()}, {"signature", to_json(t.space())}, {"arity", t.arity()}, {"components", components_json(t)}};
}

inline MultiTensor multi_tensor_from_json(const json &j)
{
	Space space = space_from_json(j, "tensor");
	const int arity = detail::require_int(j, "arity", "tensor");
	if (arity < 0)
		throw ParseError("tensor: arity must be >= 0");
	MultiTensor t(space, arity);
	read_components(t, detail::require(j, "components", "tensor"), "tensor");
	return t;
}

// ---------------------------------------------------------------------------

inline json to_json(const CurvatureJet &jet)
{
	json levels = json::array();
	for (const auto &t : jet.levels())
		levels.push_back({{"arity", t.arity()}, {"components", components_json(t)}});
	return {{"kind", "curvature_jet"}, {"n", jet.space().n()}, {"signature", to_json(jet.space())},
	        {"order", jet.order()}, {"levels", levels}};
}

inline json to_json(const SymJet &s)
{
	json levels = json::array();
	for (const auto &h : s.levels())
		levels.push_back({{"k", h.k()}, {"components", components_json(h)}});
	return {{"kind", "sym_jet"}, {"n", s.space().n()}, {"signature", to_json(s.space())}, {"order", s.order()}, {"levels", levels}};
}

inline json to_json(const PolyMetric &g)
{
	json parts = json::array();
	for (const auto &h : g.parts())
		if (!h.is_zero())
			parts.push_back({{"degree", h.k()}, {"components", components_json(h)}});
	return {{"kind", "metric"}, {"n", g.space().n()}, {"signature", to_json(g.space())}, {"order", g.order()}, {"parts", parts}};
}

/// "curvature_jet" or "sym_jet", from the kind field or the level layout.
inline std::string jet_kind(const json &j)
{
	if (j.is_object() && j.contains("kind") && j.at("kind").is_string())
		return j.at("kind").get<std::string>();
	const json &levels = detail::require(j, "levels", "jet");
	if (levels.is_array() && !levels.empty() && levels.front().is_object()) {
		if (levels.front().contains("arity"))
			return "curvature_jet";
		if (levels.front().contains("k"))
			return "sym_jet";
	}
	throw ParseError("jet: cannot tell a curvature jet from a symmetrized jet");
}

inline CurvatureJet curvature_jet_from_json(const json &j)
{
	Space space = space_from_json(j, "jet");
	const int order = detail::require_int(j, "order", "jet");
	const json &levels = detail::require(j, "levels", "jet");
	if (order < 0 || !levels.is_array() || static_cast<int>(levels.size()) != order + 1)
		throw ParseError("jet: levels must be an array of length order+1");
	CurvatureJet jet(space, order);
	for (int l = 0; l <= order; ++l) {
		const json &lv = levels.at(static_cast<std::size_t>(l));
		const std::string where = "jet level " + std::to_string(l);
		if (lv.contains("arity") && detail::require_int(lv, "arity", where) != l + 4)
			throw ParseError(where + ": arity must be " + std::to_string(l + 4));
		read_components(jet.level(l), detail::require(lv, "components", where), where);
	}
	return jet;
}

inline SymJet sym_jet_from_json(const json &j)
{
	Space space = space_from_json(j, "sym_jet");
	const int order = detail::require_int(j, "order", "sym_jet");
	const json &levels = detail::require(j, "levels", "sym_jet");
	if (order < 0 || !levels.is_array() || static_cast<int>(levels.size()) != order + 1)
		throw ParseError("sym_jet: levels must be an array of length order+1");
	SymJet s(space, order);
	for (int l = 0; l <= order; ++l) {
		const json &lv = levels.at(static_cast<std::size_t>(l));
		const std::string where = "sym_jet level " + std::to_string(l);
		if (lv.contains("k") && detail::require_int(lv, "k", where) != l + 2)
			throw ParseError(where + ": k must be " + std::to_string(l + 2));
		read_components(s.level(l), detail::require(lv, "components", where), where);
	}
	return s;
}

/// Parts are keyed by degree; missing degrees are zero. No gauge check.
inline PolyMetric metric_from_json(const json &j)
{
	Space space = space_from_json(j, "metric");
	const json &parts = detail::require(j, "parts", "metric");
	if (!parts.is_array())
		throw ParseError("metric: parts must be an array");
	int order = j.contains("order") ? detail::require_int(j, "order", "metric") : 0;
	for (const auto &p : parts)
		order = std::max(order, detail::require_int(p, "degree", "metric part"));
	std::vector<SymPairTensor> hs;
	for (int l = 1; l <= order; ++l)
		hs.emplace_back(space, l);
	for (const auto &p : parts) {
		const int d = detail::require_int(p, "degree", "metric part");
		if (d < 1)
			throw ParseError("metric part: degree must be >= 1");
		read_components(hs[static_cast<std::size_t>(d - 1)], detail::require(p, "components", "metric part"),
		                "metric part " + std::to_string(d));
	}
	return PolyMetric::unchecked(space, std::move(hs));
}

/// Series dump: each nonzero component with its nonzero monomials.
inline json to_json(const SeriesTensor &t)
{
	json comps = json::array();
	DenseShape shape = t.shape();
	Index idx(static_cast<std::size_t>(t.rank()), 0);
	std::size_t off = 0;
	do {
		const Series &s = t[off++];
		json terms = json::array();
		for (std::size_t m = 0; m < s.coefficients().size(); ++m)
			if (!s[m].is_zero())
				terms.push_back({{"exp", detail::index_json(s.index().exponents(m))}, {"coeff", s[m].to_string()}});
		if (!terms.empty())
			comps.push_back({{"idx", detail::index_json(idx)}, {"terms", terms}});
	} while (shape.next(idx));
	return {{"n", t.n()}, {"rank", t.rank()}, {"order", t.order()}, {"components", comps}};
}

} // namespace jetiso
