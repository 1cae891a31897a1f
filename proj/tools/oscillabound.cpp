// oscillabound <command> <config.json> [--seed N] [--tol X] [--budget N] [--csv PATH]
//
// Writes one JSON report to stdout. Exit 0 on success, 1 on invalid input or a
// failed computation, 2 when a certificate is contradicted.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oscillabound/cayleylab.hpp"
#include "oscillabound/padic.hpp"
#include "oscillabound/realosc.hpp"
#include "oscillabound/spectral.hpp"

namespace {

using nlohmann::ordered_json;
using namespace oscillabound;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::size_t> budget;
  std::optional<std::string> csv;
};

// ---- config reading -------------------------------------------------------

Rational rational_of(const ordered_json& j, const std::string& what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  // Decimal literals are read through their shortest text form so 0.1 means 1/10.
  if (j.is_number()) return parse_rational(ordered_json(j.get<double>()).dump());
  throw ValidationError("malformed config: " + what + " must be a number or a \"num/den\" string");
}

std::string rstr(const Rational& q) { return to_string(q); }

ordered_json rational_json(const Rational& q) { return {{"exact", rstr(q)}, {"value", q.get_d()}}; }

const ordered_json& need(const ordered_json& cfg, const std::string& key) {
  if (!cfg.contains(key)) throw ValidationError("malformed config: missing key '" + key + "'");
  return cfg.at(key);
}

std::vector<Rational> rational_list(const ordered_json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError("malformed config: " + what + " must be a list");
  std::vector<Rational> out;
  for (const auto& x : j) out.push_back(rational_of(x, what));
  return out;
}

RationalPoly poly_of(const ordered_json& j, const std::string& what) {
  return RationalPoly(rational_list(j, what + " coefficients"));
}

CurveFamily family_of(const ordered_json& cfg) {
  const auto& fam = need(cfg, "family");
  if (!fam.is_array()) throw ValidationError("malformed config: family must be a list of coefficient lists");
  std::vector<RationalPoly> polys;
  for (const auto& f : fam) polys.push_back(poly_of(f, "family"));
  return CurveFamily(std::move(polys));
}

ordered_json family_json(const CurveFamily& f) {
  ordered_json out = ordered_json::array();
  for (const auto& p : f.polys()) {
    ordered_json c = ordered_json::array();
    for (const auto& x : p.coeffs()) c.push_back(rstr(x));
    out.push_back(c);
  }
  return out;
}

std::string family_text(const CurveFamily& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < f.m(); ++i) os << (i ? ", " : "") << f[i];
  return os.str();
}

Window real_window(const ordered_json& cfg) {
  const auto& w = need(cfg, "window");
  return Window{to_long_double(rational_of(need(w, "a"), "window.a")),
                to_long_double(rational_of(need(w, "T"), "window.T"))};
}

unsigned long prime_of(const ordered_json& cfg) {
  if (!cfg.contains("prime")) throw ValidationError("malformed config: p-adic field needs 'prime'");
  const auto& p = cfg.at("prime");
  if (!p.is_number_integer() || p.get<long long>() < 2) throw ValidationError("malformed config: prime must be an integer >= 2");
  const auto v = static_cast<unsigned long>(p.get<long long>());
  require_prime(v);
  return v;
}

PadicWindow padic_window(const ordered_json& cfg) {
  const auto& w = need(cfg, "window");
  auto integer = [&](const char* key) {
    const Rational q = rational_of(need(w, key), std::string("window.") + key);
    if (q.get_den() != 1) throw ValidationError("malformed config: p-adic window bounds must be integers");
    return q.get_num().get_si();
  };
  return PadicWindow{integer("a"), integer("T"), prime_of(cfg)};
}

bool padic_field(const ordered_json& cfg) {
  const std::string f = cfg.value("field", std::string("real"));
  if (f == "real") return false;
  if (f == "padic") return true;
  throw ValidationError("malformed config: field must be \"real\" or \"padic\"");
}

std::vector<Rational> lambda_of(const ordered_json& cfg, std::size_t m) {
  auto l = rational_list(need(cfg, "lambda"), "lambda");
  if (l.size() != m) throw ValidationError("frequency dimension mismatch: lambda has " + std::to_string(l.size()) +
                                           " entries for " + std::to_string(m) + " polynomials");
  return l;
}

ordered_json lambda_json(const std::vector<Rational>& l) {
  ordered_json out = ordered_json::array();
  for (const auto& x : l) out.push_back(rstr(x));
  return out;
}

MinimizationOptions minimization_options(const ordered_json& cfg) {
  MinimizationOptions o;
  o.budget = cfg.value("budget", o.budget);
  o.seed = cfg.value("seed", o.seed);
  o.tol = cfg.value("tol", static_cast<double>(o.tol));
  o.chunk = cfg.value("chunk", o.chunk);
  if (cfg.contains("grid")) {
    const auto& g = cfg.at("grid");
    o.grid.points_per_decade = g.value("points_per_decade", o.grid.points_per_decade);
    o.grid.min_exponent = g.value("min_exponent", o.grid.min_exponent);
    o.grid.max_exponent = g.value("max_exponent", o.grid.max_exponent);
    o.grid.min_valuation = g.value("min_valuation", o.grid.min_valuation);
    o.grid.max_valuation = g.value("max_valuation", o.grid.max_valuation);
    o.grid.unit_digits = g.value("unit_digits", o.grid.unit_digits);
  }
  if (o.chunk < 1) throw ValidationError("malformed config: chunk must be >= 1");
  return o;
}

ordered_json grid_json(const GridSpec& g) {
  return {{"points_per_decade", g.points_per_decade}, {"min_exponent", g.min_exponent},
          {"max_exponent", g.max_exponent},           {"min_valuation", g.min_valuation},
          {"max_valuation", g.max_valuation},         {"unit_digits", g.unit_digits}};
}

BoxSet boxset_of(const ordered_json& cfg, const std::string& base_dir) {
  const auto& b = need(cfg, "boxset");
  if (b.is_string()) {
    std::string path = b.get<std::string>();
    if (!path.empty() && path.front() != '/' && !base_dir.empty()) path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open box set file '" + path + "'");
    return BoxSet::parse(in);
  }
  const std::size_t dim = need(b, "dim").get<std::size_t>();
  std::vector<Box> boxes;
  for (const auto& box : need(b, "boxes"))
    boxes.push_back({rational_list(need(box, "lo"), "box lo"), rational_list(need(box, "hi"), "box hi")});
  std::optional<Point> period;
  if (b.contains("period")) period = rational_list(b.at("period"), "period");
  return BoxSet(dim, std::move(boxes), std::move(period));
}

ordered_json boxset_json(const BoxSet& s) {
  ordered_json boxes = ordered_json::array();
  for (const auto& b : s.boxes()) boxes.push_back({{"lo", lambda_json(b.lo)}, {"hi", lambda_json(b.hi)}});
  ordered_json out{{"dim", s.dim()}, {"boxes", boxes}};
  if (s.period()) out["period"] = lambda_json(*s.period());
  return out;
}

MultiPoly multipoly_of(const ordered_json& j, std::size_t vars) {
  MultiPoly p{vars, {}};
  for (const auto& t : need(j, "terms")) {
    const auto e = need(t, "exponent").get<std::vector<unsigned>>();
    p.add(e, rational_of(need(t, "coef"), "term coef"));
  }
  return p;
}

ordered_json multipoly_json(const MultiPoly& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& [e, c] : p.terms) terms.push_back({{"coef", rstr(c)}, {"exponent", e}});
  return {{"terms", terms}};
}

// ---- CSV ------------------------------------------------------------------

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write CSV file '" + path + "'");
  out.imbue(std::locale::classic());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

// Shortest round-trip form; to_chars ignores the locale.
std::string num(long double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), static_cast<double>(x));
  return std::string(buf.data(), res.ptr);
}

std::vector<std::string> lambda_header(std::size_t m) {
  std::vector<std::string> h;
  for (std::size_t i = 1; i <= m; ++i) h.push_back("lambda_" + std::to_string(i));
  h.push_back("value");
  h.push_back("error");
  return h;
}

std::vector<std::vector<std::string>> sample_rows(const MinimizationReport& rep) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& s : rep.samples) {
    std::vector<std::string> r;
    for (const auto& x : s.lambda) r.push_back(num(to_long_double(x)));
    r.push_back(num(s.value));
    r.push_back(num(s.error));
    rows.push_back(std::move(r));
  }
  return rows;
}

ordered_json report_json(const MinimizationReport& rep) {
  ordered_json trace = ordered_json::array();
  for (const auto& t : rep.trace)
    trace.push_back({{"stage", t.stage}, {"lambda", lambda_json(t.lambda)}, {"value", static_cast<double>(t.value)}});
  return {{"field", rep.field.is_real() ? "real" : "padic"},
          {"best_lambda", lambda_json(rep.best_lambda)},
          {"best_value", static_cast<double>(rep.best_value)},
          {"best_error", static_cast<double>(rep.best_error)},
          {"evaluations", rep.evaluations},
          {"failures", rep.failures},
          {"partial", rep.partial},
          {"trace", trace}};
}

ordered_json case_json(const CaseTotals& c) {
  if (c.vacuous) return {{"vacuous", true}, {"interval_budget", c.interval_budget}};
  return {{"vacuous", false},
          {"interval_budget", c.interval_budget},
          {"eta_phi", static_cast<double>(c.eta_phi)},
          {"eta_psi", static_cast<double>(c.eta_psi)},
          {"per_interval", static_cast<double>(c.per_interval)},
          {"argmax_k", c.argmax_k},
          {"total", static_cast<double>(c.total)}};
}

ordered_json certificate_json(const CertifiedBound& b) {
  ordered_json consts{{"n", b.constants.n},
                      {"m", b.constants.m},
                      {"M", static_cast<double>(b.constants.M)},
                      {"L", static_cast<double>(b.constants.L)},
                      {"H", rational_json(b.constants.H)},
                      {"H_prime", rational_json(b.constants.H_prime)},
                      {"invertible_submatrices", b.constants.invertible_submatrices}};
  consts["epsilon"] = b.constants.epsilon ? ordered_json(static_cast<double>(*b.constants.epsilon)) : ordered_json();
  return {{"C", static_cast<double>(b.C)}, {"low", case_json(b.low)}, {"high", case_json(b.high)}, {"constants", consts}};
}

ordered_json padic_certificate_json(const PadicCertificate& c) {
  return {{"bound", c.bound.get_str()},
          {"floor", rational_json(c.floor)},
          {"ess", c.ess},
          {"echelon_family", family_json(c.echelon.reduced)}};
}

ordered_json decomposition_json(const IntervalDecomposition& d) {
  ordered_json out = ordered_json::array();
  for (const auto& iv : d.intervals)
    out.push_back({{"lo", static_cast<double>(iv.lo)},
                   {"hi", static_cast<double>(iv.hi)},
                   {"k", iv.k},
                   {"eta", static_cast<double>(iv.eta)},
                   {"monotone", iv.monotone}});
  return out;
}

std::function<double(double)> trig_function(const ordered_json& spec, double period) {
  const double c = rational_of(need(spec, "constant"), "function constant").get_d();
  std::vector<std::array<double, 3>> terms;
  if (spec.contains("cos"))
    for (const auto& t : spec.at("cos")) {
      const double k = need(t, "frequency").get<double>();
      if (k != std::round(k)) throw ValidationError("malformed config: cosine frequencies must be integers");
      terms.push_back({need(t, "amplitude").get<double>(), k, t.value("phase", 0.0)});
    }
  return [c, terms, period](double t) {
    double v = c;
    for (const auto& [a, k, ph] : terms) v += a * std::cos(2.0 * std::numbers::pi * k * t / period + ph);
    return v;
  };
}

// ---- commands -------------------------------------------------------------

struct Context {
  ordered_json cfg;
  std::string base_dir;
  std::optional<std::string> csv;
};

ordered_json cmd_muhat(Context& c) {
  if (padic_field(c.cfg)) throw ValidationError("muhat works on the real field; use padic-muhat");
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto w = real_window(c.cfg);
  const auto lambda = lambda_of(c.cfg, fam.m());
  const double tol = c.cfg.value("tol", 1e-9);
  const auto r = mu_hat_real(fam, w, lambda, tol);
  ordered_json out{{"value", static_cast<double>(r.value)},
                   {"error", static_cast<double>(r.error)},
                   {"evaluations", r.evaluations}};
  bool zero = true;
  for (const auto& x : lambda) zero = zero && x == 0;
  out["frequency_class"] = zero ? "zero" : to_string(classify_frequency(fam, lambda));
  if (c.csv) {
    std::vector<std::string> row;
    for (const auto& x : lambda) row.push_back(num(to_long_double(x)));
    row.push_back(num(r.value));
    row.push_back(num(r.error));
    write_csv(*c.csv, lambda_header(fam.m()), {row});
  }
  return out;
}

ordered_json cmd_minimize(Context& c) {
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto opt = minimization_options(c.cfg);
  c.cfg["grid"] = grid_json(opt.grid);
  const auto rep = padic_field(c.cfg) ? minimize_mu_hat_padic(fam, padic_window(c.cfg), opt)
                                      : minimize_mu_hat_real(fam, real_window(c.cfg), opt);
  if (c.csv) write_csv(*c.csv, lambda_header(fam.m()), sample_rows(rep));
  return report_json(rep);
}

ordered_json cmd_certify(Context& c) {
  if (padic_field(c.cfg)) throw ValidationError("certify works on the real field; use padic-certify");
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto w = real_window(c.cfg);
  w.validate(fam);
  const auto th = compute_a0_real(fam);
  const auto cert = certified_constant_real(fam);
  ordered_json out = certificate_json(cert);
  out["a0"] = th.minus_infinity_admissible ? ordered_json("-inf") : ordered_json(static_cast<double>(th.a0));
  out["window_length"] = static_cast<double>(w.length());
  out["certified_floor"] = static_cast<double>(-cert.C / w.length());
  if (c.cfg.contains("lambda")) {
    const auto lambda = lambda_of(c.cfg, fam.m());
    const auto tr = trace_frequency(fam, w, lambda);
    out["trace"] = {{"class", to_string(tr.cls)},
                    {"constant_term", static_cast<double>(tr.constant_term)},
                    {"superlevel", decomposition_json(tr.superlevel)},
                    {"pieces", decomposition_json(tr.pieces)},
                    {"budget", tr.budget},
                    {"vdc_total", static_cast<double>(tr.vdc_total)},
                    {"uncovered", static_cast<double>(tr.uncovered)},
                    {"witness_failures", tr.witness_failures},
                    {"low_set_integral", static_cast<double>(tr.low_set_integral)}};
    if (tr.pieces.size() > tr.budget) throw ConsistencyError("proof trace exceeds the interval budget");
    if (tr.witness_failures > 0) throw ConsistencyError("witness interval violates its derivative bound");
    if (c.csv) {
      std::ofstream os(*c.csv);
      if (!os) throw ValidationError("cannot write CSV file '" + *c.csv + "'");
      os.imbue(std::locale::classic());
      write_decomposition_csv(os, tr.pieces);
    }
  }
  return out;
}

ordered_json pipeline_json(const PipelineResult& r) {
  ordered_json out{{"field", r.field.is_real() ? "real" : "padic"},
                   {"C", static_cast<double>(r.C)},
                   {"window_length", static_cast<double>(r.window_length)},
                   {"certified_floor", static_cast<double>(r.certified_floor)},
                   {"certified_ratio", static_cast<double>(r.certified_ratio)},
                   {"chromatic_bound", static_cast<double>(r.chromatic_bound)},
                   {"empirical_minimum", static_cast<double>(r.empirical_minimum)}};
  out["empirical_ratio"] = r.empirical_ratio ? ordered_json(static_cast<double>(*r.empirical_ratio)) : ordered_json();
  out["report"] = report_json(r.report);
  if (r.real_certificate) out["certificate"] = certificate_json(*r.real_certificate);
  if (r.padic_certificate) out["certificate"] = padic_certificate_json(*r.padic_certificate);
  return out;
}

ordered_json cmd_pipeline(Context& c) {
  const auto fam = family_of(c.cfg);
  const auto opt = minimization_options(c.cfg);
  c.cfg["grid"] = grid_json(opt.grid);
  const auto r = padic_field(c.cfg) ? independence_pipeline(fam, padic_window(c.cfg), opt)
                                    : independence_pipeline(fam, real_window(c.cfg), opt);
  if (c.csv) write_csv(*c.csv, lambda_header(fam.m()), sample_rows(r.report));
  return pipeline_json(r);
}

ordered_json cmd_padic_muhat(Context& c) {
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto w = padic_window(c.cfg);
  const auto lambda = lambda_of(c.cfg, fam.m());
  const auto r = mu_hat_padic(fam, w, lambda, true);
  ordered_json out{{"value", static_cast<double>(r.value)}, {"nodes", r.nodes}};
  out["exact"] = r.exact ? ordered_json(rstr(*r.exact)) : ordered_json();
  out["normalization"] = rstr(w.normalization());
  if (c.csv) {
    std::vector<std::string> row;
    for (const auto& x : lambda) row.push_back(rstr(x));
    row.push_back(num(r.value));
    row.push_back("0");
    write_csv(*c.csv, lambda_header(fam.m()), {row});
  }
  return out;
}

ordered_json cmd_padic_certify(Context& c) {
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto w = padic_window(c.cfg);
  ordered_json out = padic_certificate_json(certified_bound_padic(fam, w));
  out["normalization"] = rstr(w.normalization());
  return out;
}

ordered_json cmd_config_search(Context& c) {
  const auto fam = family_of(c.cfg);
  require_independent(fam);
  const auto w = real_window(c.cfg);
  const BoxSet set = boxset_of(c.cfg, c.base_dir);
  c.cfg["boxset"] = boxset_json(set);
  const double step = need(c.cfg, "step").get<double>();
  const auto r = config_search(fam, w, set, step);
  ordered_json out{{"s_evaluated", r.s_evaluated}};
  if (r.found) {
    out["outcome"] = "Found";
    out["s"] = rational_json(r.found->s);
    out["x1"] = lambda_json(r.found->x1);
    out["x2"] = lambda_json(r.found->x2);
    out["residual"] = static_cast<double>(r.found->residual);
  } else {
    out["outcome"] = "NotFound";
    out["note"] = "the search is not exhaustive; NotFound does not certify absence";
  }
  if (c.cfg.contains("radii")) {
    const auto radii = c.cfg.at("radii").get<std::vector<double>>();
    std::vector<long double> rr(radii.begin(), radii.end());
    ordered_json dens = ordered_json::array();
    for (const auto& d : upper_density_estimate(set, rr))
      dens.push_back({{"radius", static_cast<double>(d.radius)},
                      {"value", static_cast<double>(d.value)},
                      {"error", static_cast<double>(d.error)}});
    out["density"] = dens;
  }
  return out;
}

ordered_json cmd_clique(Context& c) {
  std::vector<Point> sample;
  for (const auto& p : need(c.cfg, "sample")) sample.push_back(rational_list(p, "sample point"));
  const auto& curve = need(c.cfg, "curve");
  std::function<bool(const Point&)> in_v;
  std::vector<unsigned long> degrees;
  std::size_t dim = 0;
  if (curve.contains("parametrized")) {
    std::vector<RationalPoly> coords;
    for (const auto& f : curve.at("parametrized")) coords.push_back(poly_of(f, "curve"));
    std::optional<Rational> lo, hi;
    if (curve.contains("s_min")) lo = rational_of(curve.at("s_min"), "s_min");
    if (curve.contains("s_max")) hi = rational_of(curve.at("s_max"), "s_max");
    for (const auto& f : coords) degrees.push_back(static_cast<unsigned long>(std::max(1, f.degree())));
    dim = coords.size();
    in_v = [pc = ParametrizedCurve(std::move(coords), lo, hi)](const Point& v) { return pc.contains(v); };
  } else if (curve.contains("implicit")) {
    MultiPoly g = multipoly_of(curve.at("implicit"), 2);
    unsigned deg = 0;
    for (const auto& [e, coef] : g.terms)
      if (coef != 0) deg = std::max(deg, e[0] + e[1]);
    degrees.push_back(std::max(1U, deg));
    dim = 2;
    in_v = [ic = ImplicitPlaneCurve(std::move(g))](const Point& v) { return ic.contains(v); };
  } else {
    throw ValidationError("malformed config: curve needs 'parametrized' or 'implicit'");
  }
  for (const auto& p : sample)
    if (p.size() != dim) throw ValidationError("sample point dimension differs from the curve");
  const std::size_t max_size = c.cfg.value("max_size", std::size_t{64});
  const auto r = clique_search({sample, in_v}, max_size);
  ordered_json verts = ordered_json::array();
  for (auto i : r.vertices) verts.push_back(lambda_json(sample[i]));
  const auto bz = bezout_clique_data(c.cfg.contains("degrees") ? c.cfg.at("degrees").get<std::vector<unsigned long>>()
                                                               : degrees);
  return {{"clique_size", r.vertices.size()},
          {"clique", verts},
          {"indices", r.vertices},
          {"edges", r.edges},
          {"search_nodes", r.nodes},
          {"note", "lower bound on the clique number restricted to the sample"},
          {"bezout", {{"product_bound", bz.product_bound.get_str()}, {"d", bz.d.get_str()}, {"ramsey", bz.ramsey_symbol}}}};
}

ordered_json cmd_color_check(Context& c) {
  const auto& spec = need(c.cfg, "function");
  const double period = spec.value("period", 1.0);
  PeriodicFunction fn{trig_function(spec, period), period};
  const auto params = certify_coloring_parameters(fn);
  const long n = c.cfg.value("n", params.min_n);
  c.cfg["n"] = n;
  const std::size_t edges = c.cfg.value("edges", std::size_t{100000});
  const auto r = periodic_coloring_verify(fn, n, edges, c.cfg.value("seed", std::uint64_t{1}));
  return {{"n", r.n},
          {"edges", r.edges},
          {"violations", r.violations},
          {"parameters",
           {{"M", params.M}, {"epsilon", params.epsilon}, {"delta", params.delta}, {"min_n", params.min_n}}}};
}

ordered_json cmd_reduce(Context& c) {
  const std::size_t vars = need(c.cfg, "variables").get<std::size_t>();
  std::vector<MultiPoly> polys;
  for (const auto& p : need(c.cfg, "polynomials")) polys.push_back(multipoly_of(p, vars));
  ordered_json resolved = ordered_json::array();
  for (const auto& p : polys) resolved.push_back(multipoly_json(p));
  c.cfg["polynomials"] = resolved;
  const auto fam = multivariate_reduce(polys);
  return {{"ell", reduction_base(polys)}, {"family", family_json(fam)}, {"text", family_text(fam)},
          {"independent", check_independence(fam).independent}};
}

const std::map<std::string, std::function<ordered_json(Context&)>> dispatch_table = {
    {"muhat", cmd_muhat},
    {"minimize", cmd_minimize},
    {"certify", cmd_certify},
    {"pipeline", cmd_pipeline},
    {"padic-muhat", cmd_padic_muhat},
    {"padic-certify", cmd_padic_certify},
    {"config-search", cmd_config_search},
    {"clique", cmd_clique},
    {"color-check", cmd_color_check},
    {"reduce", cmd_reduce},
};

int fail(int code, const std::string& kind, const std::string& what, const std::string& command) {
  ordered_json err{{"command", command}, {"status", kind}, {"message", what}};
  std::cout << err.dump(2) << '\n';
  std::cerr << "oscillabound: " << kind << ": " << what << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier decay certificates for polynomial curves over the reals and the p-adics"};
  std::string command, config_path;
  Overrides ov;
  app.add_option("command", command, "one of: muhat minimize certify pipeline padic-muhat padic-certify "
                                     "config-search clique color-check reduce")
      ->required();
  app.add_option("config", config_path, "JSON config file")->required();
  app.add_option("--seed", ov.seed, "random seed");
  app.add_option("--tol", ov.tol, "quadrature tolerance");
  app.add_option("--budget", ov.budget, "evaluation budget");
  app.add_option("--csv", ov.csv, "CSV sidecar path");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const auto it = dispatch_table.find(command);
  if (it == dispatch_table.end()) return fail(1, "unknown command", "unknown command '" + command + "'", command);

  Context ctx;
  try {
    std::ifstream in(config_path);
    if (!in) return fail(1, "malformed config", "cannot open config file '" + config_path + "'", command);
    try {
      ctx.cfg = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      return fail(1, "malformed config", e.what(), command);
    }
    if (!ctx.cfg.is_object()) return fail(1, "malformed config", "config must be a JSON object", command);
    if (auto slash = config_path.rfind('/'); slash != std::string::npos) ctx.base_dir = config_path.substr(0, slash);
    if (ov.seed) ctx.cfg["seed"] = *ov.seed;
    if (ov.tol) ctx.cfg["tol"] = *ov.tol;
    if (ov.budget) ctx.cfg["budget"] = *ov.budget;
    ctx.csv = ov.csv;
    ordered_json result = it->second(ctx);
    ordered_json report{{"command", command}, {"status", "ok"}, {"config", ctx.cfg}, {"result", result}};
    std::cout << report.dump(2) << '\n';
    return 0;
  } catch (const ConsistencyError& e) {
    return fail(2, "consistency failure", e.what(), command);
  } catch (const ValidationError& e) {
    return fail(1, "validation error", e.what(), command);
  } catch (const PrecisionError& e) {
    return fail(1, "precision error", e.what(), command);
  } catch (const ConvergenceError& e) {
    return fail(1, "convergence failure",
                std::string(e.what()) + " (partial " + std::to_string(e.partial()) + ", error estimate " +
                    std::to_string(e.error_estimate()) + ")",
                command);
  } catch (const nlohmann::json::exception& e) {
    return fail(1, "malformed config", e.what(), command);
  } catch (const std::exception& e) {
    return fail(1, "error", e.what(), command);
  }
}
