// jetiso command-line tool: universal polynomials, dimension tables, metric and
// jet conversions, verification suites and worked examples.
//
// Exit codes: 0 success, 1 verification failure, 2 input or parse error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "jetiso/jetiso.hpp"

namespace {

using namespace jetiso;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

/// Input problems: reported as one line, exit code 2.
struct InputError : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

json read_json_file(const std::string &path)
{
	std::ifstream in(path);
	if (!in)
		throw InputError("cannot open " + path);
	try {
		return json::parse(in);
	}
	catch (const json::parse_error &e) {
		throw InputError(path + ": invalid JSON: " + e.what());
	}
}

void write_json_file(const std::string &path, const json &j)
{
	std::ofstream out(path);
	if (!out)
		throw InputError("cannot write " + path);
	out << j.dump() << "\n";
	if (!out)
		throw InputError("write failed: " + path);
}

Space parse_signature(const std::string &text, int n)
{
	if (text.empty())
		return Space::euclidean(n);
	std::vector<int> sig;
	std::stringstream ss(text);
	std::string item;
	while (std::getline(ss, item, ',')) {
		if (item == "+" || item == "1" || item == "+1")
			sig.push_back(1);
		else if (item == "-" || item == "-1")
			sig.push_back(-1);
		else
			throw InputError("bad signature entry \"" + item + "\"");
	}
	if (static_cast<int>(sig.size()) != n)
		throw InputError("signature has " + std::to_string(sig.size()) + " entries, expected n=" + std::to_string(n));
	return Space(sig);
}

void require_valid(const CurvatureJet &j)
{
	auto v = validate_jet(j);
	if (!v.empty())
		throw InputError("invalid jet: " + v.front().to_string());
}

void require_gauge(const PolyMetric &g)
{
	for (const auto &h : g.parts())
		if (!is_in_N(h))
			throw InputError("metric is not in normal coordinates: part of degree " + std::to_string(h.k()) + " is not in N_" +
			                 std::to_string(h.k()));
}

/// A symmetrized jet from either jet kind.
SymJet read_any_jet(const std::string &path)
{
	json j = read_json_file(path);
	const std::string kind = jet_kind(j);
	if (kind == "curvature_jet") {
		CurvatureJet jet = curvature_jet_from_json(j);
		require_valid(jet);
		return symmetrize_jet(jet);
	}
	if (kind == "sym_jet") {
		SymJet s = sym_jet_from_json(j);
		if (auto bad = s.first_invalid_level())
			throw InputError("invalid symmetrized jet: level " + std::to_string(*bad) + " is not in N_" + std::to_string(*bad + 2));
		return s;
	}
	throw InputError("unsupported jet kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------

int cmd_qpoly(int k, bool tilde, const std::string &format, int max_k)
{
	if (k < 0 || k > max_k)
		throw InputError("k=" + std::to_string(k) + " out of range [0," + std::to_string(max_k) + "]");
	FreeElement e = tilde ? qtilde_recursive(k) : q_of(k);
	if (format == "json")
		std::cout << json{{"k", k}, {"tilde", tilde}, {"terms", to_json(e)}}.dump() << "\n";
	else
		std::cout << e.to_text() << "\n";
	return kOk;
}

int cmd_dims(int n, int k, const std::string &format)
{
	if (n < 2)
		throw InputError("n must be at least 2");
	if (k < 0)
		throw InputError("k must be >= 0");
	const Space space = Space::euclidean(n);
	const long dn = dim_N(n, k + 2);
	const long dc = dim_C_lower(n, k);
	const auto rank_c = static_cast<long>(c_basis(space, k).size());
	const auto rank_n = static_cast<long>(n_basis(space, k + 2).size());
	const bool agree = dn == dc && rank_c == dn && rank_n == dn;
	if (format == "json")
		std::cout << json{{"n", n}, {"k", k}, {"dimN", dn}, {"dimC_lower", dc}, {"rank", rank_c}, {"rankN", rank_n}, {"agree", agree}}.dump()
		          << "\n";
	else
		std::cout << "dimN=" << dn << " dimC_lower=" << dc << " rank=" << rank_c << "\n";
	if (!agree) {
		std::cerr << "error: dimension mismatch: dimN=" << dn << " dimC_lower=" << dc << " rankC=" << rank_c << " rankN=" << rank_n
		          << "\n";
		return kVerifyFailed;
	}
	return kOk;
}

int cmd_expand(const std::string &in, int order, const std::string &out)
{
	SymJet s = read_any_jet(in);
	if (order < 0)
		order = s.order() + 2;
	if (order < 2)
		throw InputError("metric order must be at least 2");
	PolyMetric g = metric_from_symjet(s.resized(order - 2));
	write_json_file(out, to_json(g));
	return kOk;
}

int cmd_jet(const std::string &metric, int k, const std::string &out)
{
	if (k < 0)
		throw InputError("k must be >= 0");
	PolyMetric g = metric_from_json(read_json_file(metric));
	require_gauge(g);
	CurvatureJet j = curvature_jet_at_origin(g, k);
	auto v = validate_jet(j);
	if (!v.empty()) {
		std::cerr << "error: computed jet fails validation: " << v.front().to_string() << "\n";
		return kVerifyFailed;
	}
	write_json_file(out, to_json(j));
	return kOk;
}

int cmd_roundtrip(const std::string &metric, int k)
{
	if (k < 0)
		throw InputError("k must be >= 0");
	PolyMetric g = metric_from_json(read_json_file(metric));
	require_gauge(g);
	Report r;
	r.guarded("roundtrip.metric_to_jet_to_metric", [&](std::string &d) { return check_metric_roundtrip(g, k, d); });
	CurvatureJet j = curvature_jet_at_origin(g, k);
	r.guarded("roundtrip.jet_injectivity", [&](std::string &d) { return check_jet_injectivity(j, d); });
	r.print(std::cout);
	return r.ok() ? kOk : kVerifyFailed;
}

int cmd_extend(const std::string &in, const std::string &out, const std::string &route)
{
	json doc = read_json_file(in);
	CurvatureJet j;
	if (jet_kind(doc) == "sym_jet") {
		SymJet s = sym_jet_from_json(doc);
		if (auto bad = s.first_invalid_level())
			throw InputError("invalid symmetrized jet: level " + std::to_string(*bad) + " is not in N_" + std::to_string(*bad + 2));
		j = jet_from_symjet(s);
	}
	else {
		j = curvature_jet_from_json(doc);
		require_valid(j);
	}
	CurvatureJet ext;
	if (route == "linear") {
		auto lin = extend_jet_linear(j);
		if (!lin) {
			std::cerr << "error: extension system is inconsistent\n";
			return kVerifyFailed;
		}
		ext = *lin;
	}
	else {
		ext = extend_jet(j);
	}
	auto v = validate_jet(ext);
	if (!v.empty() || ext.truncated(j.order()) != j) {
		std::cerr << "error: extension failed validation" << (v.empty() ? "" : ": " + v.front().to_string()) << "\n";
		return kVerifyFailed;
	}
	write_json_file(out, to_json(ext));
	return kOk;
}

int cmd_verify(const std::string &suite, int n, const std::string &signature, int max_k, std::uint64_t seed, int trials,
               const std::string &format)
{
	if (n < 2)
		throw InputError("n must be at least 2");
	if (max_k < 0 || trials < 0)
		throw InputError("max-k and trials must be >= 0");
	VerifyOptions o;
	o.space = parse_signature(signature, n);
	o.max_k = max_k;
	o.seed = seed;
	o.trials = trials;
	Report r;
	try {
		r = verify_suite(suite, o);
	}
	catch (const std::invalid_argument &e) {
		throw InputError(e.what());
	}
	if (format == "json") {
		json checks = json::array();
		for (const auto &c : r.results())
			checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
		std::cout << json{{"suite", suite}, {"passed", r.passed()}, {"failed", r.failed()}, {"checks", checks}}.dump(2) << "\n";
	}
	else {
		r.print(std::cout);
	}
	return r.ok() ? kOk : kVerifyFailed;
}

int cmd_example(const std::string &name, const std::string &kappa_text, int n, const std::string &signature, int order,
                const std::string &prefix)
{
	if (name != "const-curvature")
		throw InputError("unknown example \"" + name + "\"");
	if (n < 2)
		throw InputError("n must be at least 2");
	if (order < 2)
		throw InputError("metric order must be at least 2");
	Rational kappa;
	try {
		kappa = Rational::parse(kappa_text);
	}
	catch (const std::exception &e) {
		throw InputError("bad kappa \"" + kappa_text + "\": " + e.what());
	}
	const Space space = parse_signature(signature, n);
	SymJet s = const_curvature_symjet(space, kappa, order - 2);
	PolyMetric g = metric_from_symjet(s);
	CurvatureJet j = curvature_jet_at_origin(g, order - 2);
	auto v = validate_jet(j);
	if (!v.empty() || symmetrize_jet(j) != s || !check_normal_gauge(g)) {
		std::cerr << "error: example failed validation" << (v.empty() ? "" : ": " + v.front().to_string()) << "\n";
		return kVerifyFailed;
	}
	write_json_file(prefix + "_symjet.json", to_json(s));
	write_json_file(prefix + "_jet.json", to_json(j));
	write_json_file(prefix + "_metric.json", to_json(g));

	// g(t e_0)(e_1, e_1) = eps_1 sum_m c_m t^{2m}.
	const SeriesTensor gs = g.series(order);
	std::cout << "orthogonal_coefficients=";
	for (int m = 0; 2 * m <= order; ++m) {
		std::vector<int> e(static_cast<std::size_t>(n), 0);
		e[0] = 2 * m;
		Rational c = gs[static_cast<std::size_t>(n + 1)].coefficient(e) * Rational(space.eps(1));
		std::cout << (m ? "," : "") << c;
	}
	std::cout << "\n";
	std::cout << "wrote " << prefix << "_symjet.json " << prefix << "_jet.json " << prefix << "_metric.json\n";
	return kOk;
}

} // namespace

int main(int argc, char **argv)
{
	CLI::App app{"Curvature jets, symmetrized jets and metrics in normal coordinates"};
	app.require_subcommand(1);

	int k = 0, n = 3, max_k = 12, order = -1, trials = 3;
	bool tilde = false;
	std::uint64_t seed = 1;
	std::string format = "text", in, out, metric, suite = "all", name = "const-curvature", kappa = "1", signature, route = "metric";
	int verify_max_k = 2;

	auto *qpoly = app.add_subcommand("qpoly", "print Q_k or Q~_k");
	qpoly->add_option("-k", k, "degree")->required();
	qpoly->add_flag("--tilde", tilde, "print Q~_k instead of Q_k");
	qpoly->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
	qpoly->add_option("--max-k", max_k, "largest accepted k");

	auto *dims = app.add_subcommand("dims", "dimension of N_{k+2} and C_k with computed ranks");
	dims->add_option("-n", n)->required();
	dims->add_option("-k", k)->required();
	dims->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

	auto *expand = app.add_subcommand("expand", "metric in normal coordinates from a jet file");
	expand->add_option("--in", in)->required();
	expand->add_option("--order", order, "polynomial degree of the metric (default: jet order + 2)");
	expand->add_option("--out", out)->required();

	auto *jet = app.add_subcommand("jet", "curvature jet at the origin of a metric file");
	jet->add_option("--metric", metric)->required();
	jet->add_option("-k", k)->required();
	jet->add_option("--out", out)->required();

	auto *roundtrip = app.add_subcommand("roundtrip", "check metric -> jet -> metric");
	roundtrip->add_option("--metric", metric)->required();
	roundtrip->add_option("-k", k)->required();

	auto *extend = app.add_subcommand("extend", "extend a jet by one order");
	extend->add_option("--in", in)->required();
	extend->add_option("--out", out)->required();
	extend->add_option("--route", route, "metric (canonical) or linear")->check(CLI::IsMember({"metric", "linear"}));

	auto *verify = app.add_subcommand("verify", "run property suites");
	verify->add_option("--suite", suite)->check(CLI::IsMember({"all", "freealg", "linear", "young", "roundtrip", "transport"}));
	verify->add_option("-n", n);
	verify->add_option("--signature", signature, "comma-separated +1/-1 entries");
	verify->add_option("--max-k", verify_max_k);
	verify->add_option("--seed", seed);
	verify->add_option("--trials", trials);
	verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

	auto *example = app.add_subcommand("example", "write a worked example");
	example->add_option("--name", name)->check(CLI::IsMember({"const-curvature"}));
	example->add_option("--kappa", kappa);
	example->add_option("-n", n);
	example->add_option("--signature", signature, "comma-separated +1/-1 entries");
	example->add_option("--order", order, "polynomial degree of the metric")->required();
	example->add_option("--out", out, "output prefix")->required();

	try {
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp &e) {
		return app.exit(e);
	}
	catch (const CLI::ParseError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInputError;
	}

	try {
		if (*qpoly)
			return cmd_qpoly(k, tilde, format, max_k);
		if (*dims)
			return cmd_dims(n, k, format);
		if (*expand)
			return cmd_expand(in, order, out);
		if (*jet)
			return cmd_jet(metric, k, out);
		if (*roundtrip)
			return cmd_roundtrip(metric, k);
		if (*extend)
			return cmd_extend(in, out, route);
		if (*verify)
			return cmd_verify(suite, n, signature, verify_max_k, seed, trials, format);
		if (*example)
			return cmd_example(name, kappa, n, signature, order, out);
	}
	catch (const InputError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInputError;
	}
	catch (const ParseError &e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInputError;
	}
	catch (const std::invalid_argument &e) {
		std::cerr << "error: " << e.what() << "\n";
		return kInputError;
	}
	catch (const std::exception &e) {
		std::cerr << "error: internal: " << e.what() << "\n";
		return kVerifyFailed;
	}
	return kInputError;
}
