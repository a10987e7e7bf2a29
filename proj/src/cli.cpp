#include "minclique/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "minclique/clique_bounds.hpp"
#include "minclique/detail/parallel.hpp"
#include "minclique/errors.hpp"
#include "minclique/montecarlo.hpp"
#include "minclique/subgraph_tools.hpp"

namespace minclique::cli {

using nlohmann::json;

std::string format_prob(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5e", x);
  return buf;
}

std::string format_exact(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

std::string format_5dp(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5f", x);
  return buf;
}

// Scientific notation from the log magnitude, so values far outside the
// double range still print.
std::string format_slr(const SignedLogReal& x) {
  if (x.is_zero()) return format_prob(0.0);
  const double l10 = x.log_abs() / std::log(10.0);
  if (std::fabs(l10) < 300.0) return format_prob(x.to_real());
  auto e = static_cast<long long>(std::floor(l10));
  double mant = std::pow(10.0, l10 - static_cast<double>(e));
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5f", mant);
  if (buf[0] == '1' && buf[1] == '0') mant /= 10.0, ++e;  // rounded up to 10.00000
  std::snprintf(buf, sizeof buf, "%s%.5fe%+03lld", x.sign() < 0 ? "-" : "", mant, e);
  return buf;
}

json slr_json(const SignedLogReal& x) {
  const double v = x.to_real();
  if (std::isfinite(v) && (v != 0.0 || x.is_zero())) return v;
  return format_slr(x);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string yes_no(bool b) { return b ? "true" : "false"; }

struct Section {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Emission {
  std::vector<Section> sections;
  json result;
};

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (c.n) j["n"] = *c.n;
  if (c.k) j["k"] = *c.k;
  if (c.graph) j["graph"] = *c.graph;
  j["dist"] = c.dist;
  if (c.w) j["w"] = *c.w;
  if (c.z) j["z"] = *c.z;
  if (c.observed) j["observed"] = *c.observed;
  if (c.command == "test") j["tail"] = c.tail, j["alpha"] = c.alpha;
  if (c.grid_points) j["grid_points"] = *c.grid_points;
  if (c.command == "curve" || c.command == "simulate" || c.command == "graph-info") j["x_max"] = c.x_max;
  if (c.command == "simulate") {
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    j["delta"] = c.delta;
    if (!c.samples_out.empty()) j["samples"] = c.samples_out;
  }
  if (c.all_rows) j["all"] = true;
  j["format"] = c.format;
  if (!c.out.empty()) j["out"] = c.out;
  j["digits"] = c.digits;
  j["force_guards"] = c.force_guards;
  return j;
}

void write_emission(const RunConfig& cfg, const Emission& em, std::ostream& os) {
  if (cfg.format == "json") {
    json top;
    top["config"] = config_json(cfg);
    top["result"] = em.result;
    os << top.dump(2) << '\n';
    return;
  }
  os << "# config: " << cfg.describe() << '\n';
  for (std::size_t s = 0; s < em.sections.size(); ++s) {
    if (s > 0) os << '\n';
    const auto& sec = em.sections[s];
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
      os << '\n';
    };
    line(sec.header);
    for (const auto& r : sec.rows) line(r);
  }
}

// Host order: an integer, also accepted in exponent form such as 3e6.
std::int64_t parse_n(const std::string& text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto r = std::from_chars(text.data(), end, v);
  if (r.ec == std::errc() && r.ptr == end) return v;
  double d = 0.0;
  auto rd = std::from_chars(text.data(), end, d);
  if (rd.ec != std::errc() || rd.ptr != end || !(d >= 0.0) || d > 9.0e15 || std::floor(d) != d)
    throw DomainError("--n must be a non-negative integer, got '" + text + "'");
  return static_cast<std::int64_t>(d);
}

GraphSpec load_graph(const std::string& source, bool force) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    std::ifstream in(source);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), force);
  }
  return parse_graph(source, force);
}

// The resolved target of a command: a clique size or a general graph.
struct Resolved {
  std::optional<CliqueInstance> clique;
  GraphSpec graph;  // K_k for cliques
  WeightModel model;
  std::int64_t n = 0;

  std::string label() const { return graph.name().empty() ? "H" : graph.name(); }
  double inv_density() const { return static_cast<double>(graph.v()) / graph.m(); }
  double w_from_z(double z) const {
    return clique ? weight_from_scaled(*clique, z) : z * std::pow(static_cast<double>(n), -inv_density());
  }
  double z_from_w(double w) const {
    return clique ? scaled_weight(*clique, w) : w * std::pow(static_cast<double>(n), inv_density());
  }
  /// Asymptotic mean on the scale of `model`; absent unless strictly balanced.
  std::optional<double> mu_hat() const {
    if (!graph.strictly_balanced()) return std::nullopt;
    return asymptotic_mean(graph, n) / model.rate();
  }
  BoundReport bounds(double w, const PrecisionConfig& pc, bool force) const {
    return clique ? cdf_bounds(*clique, w, pc) : general_bounds(graph, n, w, model, pc, force);
  }
  std::vector<BoundReport> curve(const std::vector<double>& grid, const PrecisionConfig& pc, bool force) const {
    if (clique) return cdf_curve(*clique, grid, pc);
    std::vector<BoundReport> out(grid.size());
    detail::parallel_for(grid.size(), [&](std::size_t i) { out[i] = bounds(grid[i], pc, force); });
    monotonize_lower(out);
    return out;
  }
};

Resolved resolve_target(const RunConfig& cfg, bool need_n) {
  Resolved t;
  t.model = WeightModel::parse(cfg.dist);
  if (need_n && !cfg.n) throw DomainError("--n is required");
  t.n = cfg.n.value_or(0);
  if (cfg.k.has_value() == cfg.graph.has_value()) throw DomainError("give exactly one of --k and --graph");
  if (cfg.k) {
    if (*cfg.k < 3) throw DomainError("--k must be >= 3");
    t.graph = GraphSpec::complete(*cfg.k);
    if (cfg.n) {
      t.clique = CliqueInstance{*cfg.n, *cfg.k, t.model};
      t.clique->validate();
    }
  } else {
    t.graph = load_graph(*cfg.graph, cfg.force_guards);
    if (cfg.n && *cfg.n < t.graph.v()) throw DomainError("--n must be at least the number of vertices of H");
  }
  return t;
}

PrecisionConfig precision(const RunConfig& cfg) {
  PrecisionConfig pc;
  pc.working_digits = cfg.digits;
  pc.validate();
  return pc;
}

std::vector<std::string> bound_header() {
  return {"w", "z", "lambda", "b1", "b2", "lower_raw", "upper_raw", "lower", "upper", "simplified_bound",
          "closed_form", "thm2_hypothesis", "quadrature", "valid", "note"};
}

std::vector<std::string> bound_row(const BoundReport& r) {
  return {format_exact(r.w),
          format_exact(r.z),
          format_slr(r.lambda),
          format_slr(r.b1),
          format_slr(r.b2),
          format_prob(r.lower_raw),
          format_prob(r.upper_raw),
          format_prob(r.lower),
          format_prob(r.upper),
          r.simplified_bound ? format_prob(*r.simplified_bound) : "",
          yes_no(r.flags.closed_form_w_le_1),
          yes_no(r.flags.thm2_hypothesis),
          yes_no(r.flags.quadrature_used),
          yes_no(r.flags.valid),
          r.note};
}

json bound_json(const BoundReport& r) {
  json j;
  j["w"] = r.w;
  j["z"] = r.z;
  j["log_p"] = r.log_p;
  j["lambda"] = slr_json(r.lambda);
  j["b1"] = slr_json(r.b1);
  j["b2"] = slr_json(r.b2);
  j["lower_raw"] = r.lower_raw;
  j["upper_raw"] = r.upper_raw;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["simplified_bound"] = r.simplified_bound ? json(*r.simplified_bound) : json(nullptr);
  j["flags"] = {{"closed_form", r.flags.closed_form_w_le_1},
                {"thm2_hypothesis", r.flags.thm2_hypothesis},
                {"quadrature", r.flags.quadrature_used},
                {"valid", r.flags.valid}};
  j["note"] = r.note;
  return j;
}

// ---- commands ----

int cmd_bounds(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, true);
  if (cfg.w.has_value() == cfg.z.has_value()) throw DomainError("give exactly one of --w and --z");
  const double w = cfg.w ? *cfg.w : t.w_from_z(*cfg.z);
  const auto r = t.bounds(w, precision(cfg), cfg.force_guards);
  em.sections.push_back({bound_header(), {bound_row(r)}});
  em.result = bound_json(r);
  return r.flags.valid ? kOk : kQuadrature;
}

const std::vector<std::pair<int, std::int64_t>> kStandardRows = {
    {3, 100}, {3, 1000}, {3, 10000}, {3, 100000}, {4, 100},
    {4, 1000}, {4, 10000}, {4, 100000}, {10, 3000000}, {10, 10000000}};

int cmd_table(const RunConfig& cfg, Emission& em) {
  std::vector<std::pair<int, std::int64_t>> rows;
  if (cfg.all_rows) {
    if (cfg.n || cfg.k) throw DomainError("--all does not combine with --n or --k");
    rows = kStandardRows;
  } else {
    if (!cfg.n || !cfg.k) throw DomainError("table needs --n and --k, or --all");
    rows.emplace_back(*cfg.k, *cfg.n);
  }
  if (cfg.graph) throw DomainError("table is defined for cliques only");
  const auto model = WeightModel::parse(cfg.dist);
  const auto pc = precision(cfg);
  Section sec{{"k", "n", "col_005", "mu_hat", "lb_at_mu", "ub_at_mu", "col_095", "max_gap"}, {}};
  em.result = json::array();
  for (const auto& [k, n] : rows) {
    const CliqueInstance inst{n, k, model};
    const auto r = table_stats(inst, pc);
    sec.rows.push_back({std::to_string(k), std::to_string(n), format_5dp(r.col_005), format_5dp(r.mu_hat),
                        format_5dp(r.lb_at_mu), format_5dp(r.ub_at_mu),
                        r.col_095 ? format_5dp(*r.col_095) : "---", format_5dp(r.max_gap)});
    em.result.push_back({{"k", k},
                         {"n", n},
                         {"col_005", r.col_005},
                         {"mu_hat", r.mu_hat},
                         {"lb_at_mu", r.lb_at_mu},
                         {"ub_at_mu", r.ub_at_mu},
                         {"col_095", r.col_095 ? json(*r.col_095) : json(nullptr)},
                         {"max_gap", r.max_gap},
                         {"w_005", r.w_005},
                         {"w_095", r.w_095 ? json(*r.w_095) : json(nullptr)},
                         {"w_max_gap", r.w_max_gap},
                         {"w_lower_peak", r.w_lower_peak},
                         {"lower_peak", r.lower_peak},
                         {"gap_is_one_minus_peak", r.gap_is_one_minus_peak}});
  }
  em.sections.push_back(std::move(sec));
  if (!cfg.all_rows) em.result = em.result[0];
  return kOk;
}

// x_j = j x_max / N for j = 0..N, in units of the asymptotic mean.
std::vector<double> mean_grid(const RunConfig& cfg, int default_points, bool with_zero) {
  const int pts = cfg.grid_points.value_or(default_points);
  if (pts < 1) throw DomainError("--grid-points must be >= 1");
  if (!(cfg.x_max > 0.0) || !std::isfinite(cfg.x_max)) throw DomainError("--x-max must be positive");
  std::vector<double> xs;
  for (int j = with_zero ? 0 : 1; j <= pts; ++j) xs.push_back(j * cfg.x_max / pts);
  return xs;
}

int cmd_curve(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, true);
  const auto mu = t.mu_hat();
  if (!mu) throw ValidityError("curve needs a strictly balanced H for the asymptotic mean");
  const auto xs = mean_grid(cfg, 300, true);
  std::vector<double> ws;
  for (double x : xs) ws.push_back(x * *mu);
  const auto curve = t.curve(ws, precision(cfg), cfg.force_guards);

  Section sec{{"w", "w_over_mu", "lower", "upper", "lower_raw", "upper_raw", "valid"}, {}};
  json pts = json::array();
  bool valid = true;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& r = curve[i];
    valid = valid && r.flags.valid;
    sec.rows.push_back({format_exact(r.w), format_exact(xs[i]), format_prob(r.lower), format_prob(r.upper),
                        format_prob(r.lower_raw), format_prob(r.upper_raw), yes_no(r.flags.valid)});
    pts.push_back({{"w", r.w},
                   {"w_over_mu", xs[i]},
                   {"lower", r.lower},
                   {"upper", r.upper},
                   {"lower_raw", r.lower_raw},
                   {"upper_raw", r.upper_raw},
                   {"valid", r.flags.valid}});
  }
  em.sections.push_back(std::move(sec));
  em.result = {{"mu_hat", *mu}, {"points", std::move(pts)}};
  return valid ? kOk : kQuadrature;
}

int cmd_test(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, true);
  if (!t.clique) throw DomainError("test is defined for cliques only (use --k)");
  if (!cfg.observed) throw DomainError("--observed is required");
  const auto r = significance_test(*t.clique, *cfg.observed, parse_tail(cfg.tail), cfg.alpha, precision(cfg));
  em.sections.push_back({{"observed", "tail", "alpha", "cdf_lower", "cdf_upper", "p_value_lower", "p_value_upper",
                          "verdict", "explanation"},
                         {{format_exact(r.observed_w), to_string(r.tail), format_exact(r.alpha),
                           format_prob(r.cdf_lower), format_prob(r.cdf_upper), format_prob(r.p_value_lower),
                           format_prob(r.p_value_upper), to_string(r.verdict), r.explanation}}});
  em.result = {{"observed", r.observed_w},     {"tail", to_string(r.tail)},         {"alpha", r.alpha},
               {"cdf_lower", r.cdf_lower},     {"cdf_upper", r.cdf_upper},         {"p_value_lower", r.p_value_lower},
               {"p_value_upper", r.p_value_upper}, {"verdict", to_string(r.verdict)}, {"explanation", r.explanation}};
  return kOk;
}

void write_samples(const RunConfig& cfg, const EmpiricalCdf& emp) {
  std::ofstream f(cfg.samples_out, std::ios::binary);
  if (!f) throw DomainError("cannot open samples file '" + cfg.samples_out + "'");
  f << "# seed=" << emp.master_seed() << " trials=" << emp.trials() << " instance=" << emp.description() << '\n';
  f << "W\n";
  for (double x : emp.samples()) f << format_exact(x) << '\n';
}

int cmd_simulate(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, true);
  if (t.n > std::numeric_limits<int>::max()) throw DomainError("--n too large to simulate");
  const auto target = t.clique ? Target::clique(t.clique->k) : Target::subgraph(t.graph);
  const auto emp = run_trials(static_cast<int>(t.n), target, t.model, cfg.trials, cfg.seed, 0, cfg.force_guards);
  if (!cfg.samples_out.empty()) write_samples(cfg, emp);

  // Envelope grid: multiples of the asymptotic mean when it exists, else of
  // the largest sample.
  const auto mu = t.mu_hat();
  const double unit = mu ? *mu : emp.samples().back() / cfg.x_max;
  std::vector<double> xs = mean_grid(cfg, 200, false), ws;
  for (double x : xs) ws.push_back(x * unit);
  const auto curve = t.curve(ws, precision(cfg), cfg.force_guards);
  const auto env = envelope_check(emp, curve, cfg.delta);

  const double se = emp.trials() > 1 ? emp.standard_error() : 0.0;
  std::optional<MeanReport> mr;
  if (mu && emp.trials() >= 100) mr = mean_check(emp, *mu);

  auto opt = [](const std::optional<double>& v) { return v ? format_exact(*v) : std::string(); };
  Section summary{{"trials", "seed", "mean", "standard_error", "epsilon", "points", "violations", "worst_margin",
                   "worst_w", "envelope_passed", "mu_hat", "ratio", "z_score", "within_3se", "within_5pct"},
                  {{std::to_string(emp.trials()), std::to_string(emp.master_seed()), format_exact(emp.mean()),
                    format_exact(se), format_exact(env.epsilon), std::to_string(env.points),
                    std::to_string(env.violations), format_exact(env.worst_margin), format_exact(env.worst_w),
                    yes_no(env.passed), opt(mu), mr ? format_exact(mr->ratio) : "",
                    mr ? format_exact(mr->z_score) : "", mr ? yes_no(mr->within_3se) : "",
                    mr ? yes_no(mr->within_5pct) : ""}}};
  Section band{{"w", "w_over_mu", "empirical", "lower", "upper", "inside"}, {}};
  json pts = json::array();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& r = curve[i];
    const double f = emp.cdf(r.w);
    const bool inside = f >= r.lower - env.epsilon && f <= r.upper + env.epsilon;
    band.rows.push_back({format_exact(r.w), mu ? format_exact(xs[i]) : "", format_prob(f), format_prob(r.lower),
                         format_prob(r.upper), yes_no(inside)});
    pts.push_back({{"w", r.w}, {"empirical", f}, {"lower", r.lower}, {"upper", r.upper}, {"inside", inside}});
  }
  em.sections.push_back(std::move(summary));
  em.sections.push_back(std::move(band));

  em.result = {{"description", emp.description()},
               {"trials", emp.trials()},
               {"seed", emp.master_seed()},
               {"mean", emp.mean()},
               {"standard_error", se},
               {"envelope",
                {{"delta", env.delta},
                 {"epsilon", env.epsilon},
                 {"points", env.points},
                 {"violations", env.violations},
                 {"worst_margin", env.worst_margin},
                 {"worst_w", env.worst_w},
                 {"passed", env.passed}}},
               {"curve", std::move(pts)}};
  if (mr)
    em.result["mean_check"] = {{"mu_hat", mr->mu_hat},         {"ratio", mr->ratio},
                               {"z_score", mr->z_score},       {"within_3se", mr->within_3se},
                               {"within_5pct", mr->within_5pct}};
  else
    em.result["mean_check"] = nullptr;
  return kOk;
}

int cmd_graph_info(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, false);
  const auto& g = t.graph;
  const auto mu = cfg.n ? t.mu_hat() : std::nullopt;
  const auto dp = g.d_prime();
  em.sections.push_back(
      {{"name", "v", "m", "density", "a_H", "strictly_balanced", "d_prime", "n", "mu_hat"},
       {{t.label(), std::to_string(g.v()), std::to_string(g.m()), g.density().to_string(),
         std::to_string(g.automorphisms()), yes_no(g.strictly_balanced()), dp ? dp->to_string() : "",
         cfg.n ? std::to_string(*cfg.n) : "", mu ? format_exact(*mu) : ""}}});
  json edges = json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  em.result = {{"name", t.label()},
               {"v", g.v()},
               {"m", g.m()},
               {"edges", std::move(edges)},
               {"density", g.density().to_string()},
               {"a_H", g.automorphisms()},
               {"strictly_balanced", g.strictly_balanced()},
               {"d_prime", dp ? json(dp->to_string()) : json(nullptr)},
               {"mu_hat", mu ? json(*mu) : json(nullptr)}};

  if (mu) {
    // Limit law sampled at multiples of the asymptotic mean.
    Section sec{{"w_over_mu", "w", "z", "asymptotic_cdf"}, {}};
    json pts = json::array();
    for (double x : mean_grid(cfg, 10, false)) {
      const double w = x * *mu;
      const double z = t.z_from_w(w) * t.model.rate();
      const auto a = asymptotic_cdf(g, *cfg.n, z);
      sec.rows.push_back({format_exact(x), format_exact(w), format_exact(z), format_prob(a.cdf)});
      pts.push_back({{"w_over_mu", x}, {"w", w}, {"z", z}, {"cdf", a.cdf}});
    }
    em.sections.push_back(std::move(sec));
    em.result["asymptotic_cdf"] = std::move(pts);
  }
  return kOk;
}

int cmd_mean(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, true);
  const auto mu = t.mu_hat();
  if (!mu) throw ValidityError("the asymptotic mean needs a strictly balanced H");
  const double scaled = t.z_from_w(*mu);
  em.sections.push_back({{"target", "n", "dist", "mu_hat", "scaled_mean"},
                         {{t.label(), std::to_string(t.n), t.model.describe(), format_exact(*mu),
                           format_exact(scaled)}}});
  em.result = {{"target", t.label()}, {"n", t.n}, {"dist", t.model.describe()}, {"mu_hat", *mu},
               {"scaled_mean", scaled}};
  return kOk;
}

int cmd_census(const RunConfig& cfg, Emission& em) {
  const auto t = resolve_target(cfg, false);
  const auto classes = overlap_census(t.graph, cfg.force_guards);
  Section sec{{"ell", "a", "b", "coefficients"}, {}};
  if (cfg.n) sec.header.push_back("count");
  em.result = json::array();
  for (const auto& c : classes) {
    std::string coeffs;
    json jc = json::array();
    for (const auto& [j, q] : c.count_poly.terms) {
      coeffs += (coeffs.empty() ? "" : ";") + std::to_string(j) + ":" + q.to_string();
      jc.push_back({j, q.to_string()});
    }
    std::vector<std::string> row{std::to_string(c.ell), std::to_string(c.a), std::to_string(c.b1_unique), coeffs};
    json jrow = {{"ell", c.ell}, {"a", c.a}, {"b", c.b1_unique}, {"coefficients", jc},
                 {"polynomial", c.count_poly.to_string()}};
    if (cfg.n) {
      const auto cnt = c.count_poly.eval(*cfg.n);
      row.push_back(format_slr(cnt));
      jrow["count"] = slr_json(cnt);
    }
    sec.rows.push_back(std::move(row));
    em.result.push_back(std::move(jrow));
  }
  em.sections.push_back(std::move(sec));
  return kOk;
}

}  // namespace

std::string RunConfig::describe() const {
  std::string s = "command=" + command;
  auto add = [&](const std::string& k, const std::string& v) { s += " " + k + "=" + v; };
  const json j = config_json(*this);
  for (const auto& [key, val] : j.items()) {
    if (key == "command") continue;
    if (val.is_string()) {
      const auto text = val.get<std::string>();
      add(key, text.find_first_of(" \t\n\"=") == std::string::npos && !text.empty() ? text : val.dump());
    } else if (val.is_number_float()) add(key, format_exact(val.get<double>()));
    else add(key, val.dump());
  }
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds, simulation and significance tests for the minimum-weight clique in a weighted complete graph",
               "minclique"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  RunConfig cfg;
  std::string n_text;
  int k = 0, grid = 0;
  std::string graph;
  double w = 0.0, z = 0.0, observed = 0.0;

  auto add_target = [&](CLI::App* sub, bool n_required) {
    sub->add_option("--n", n_text, "Host order n (integer, exponent form like 3e6 accepted)")->required(n_required);
    auto* ko = sub->add_option("--k", k, "Clique size k >= 3");
    auto* go = sub->add_option("--graph", graph, "Graph H: preset (K4, C5, P3), edge list \"0 1 1 2\", or file");
    ko->excludes(go);
    sub->add_option("--dist", cfg.dist, "Edge weight law: uniform | exp | exp:RATE")->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sub->add_option("--digits", cfg.digits, "Working precision in significant digits (>= 15)")
        ->capture_default_str();
    sub->add_flag("--force-guards", cfg.force_guards, "Run past the size guards");
  };
  auto add_grid = [&](CLI::App* sub, int def) {
    sub->add_option("--grid-points", grid, "Number of grid points (default " + std::to_string(def) + ")");
    sub->add_option("--x-max", cfg.x_max, "Grid extent in units of the asymptotic mean")->capture_default_str();
  };

  auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on P(W < w) at one weight");
  add_target(bounds, true);
  auto* wo = bounds->add_option("--w", w, "Weight threshold w >= 0");
  auto* zo = bounds->add_option("--z", z, "Scaled threshold z, w = z n^(-1/d)");
  wo->excludes(zo);
  add_common(bounds);

  auto* table = app.add_subcommand("table", "Bound-quality summary row(s) for cliques");
  add_target(table, false);
  table->add_flag("--all", cfg.all_rows, "All ten standard (k, n) rows");
  add_common(table);

  auto* curve = app.add_subcommand("curve", "Bound curves on a grid in units of the asymptotic mean");
  add_target(curve, true);
  add_grid(curve, 300);
  add_common(curve);

  auto* test = app.add_subcommand("test", "Significance test of an observed minimum weight");
  add_target(test, true);
  test->add_option("--observed", observed, "Observed minimum clique weight")->required();
  test->add_option("--tail", cfg.tail, "lower | upper")
      ->check(CLI::IsMember({"lower", "upper"}))
      ->capture_default_str();
  test->add_option("--alpha", cfg.alpha, "Significance level in (0, 1)")->capture_default_str();
  add_common(test);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo trials checked against the bounds and the mean");
  add_target(sim, true);
  sim->add_option("--trials", cfg.trials, "Number of trials")->capture_default_str();
  sim->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  sim->add_option("--delta", cfg.delta, "Envelope confidence parameter in (0, 1)")->capture_default_str();
  sim->add_option("--samples", cfg.samples_out, "Also write the sorted sample values to this CSV file");
  add_grid(sim, 200);
  add_common(sim);

  auto* info = app.add_subcommand("graph-info", "Structure of H and its limit law");
  add_target(info, false);
  add_grid(info, 10);
  add_common(info);

  auto* mean = app.add_subcommand("mean", "Asymptotic mean of the minimum weight");
  add_target(mean, true);
  add_common(mean);

  auto* census = app.add_subcommand("census", "Overlap classes of pairs of copies of H");
  add_target(census, false);
  add_common(census);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kValidity;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto given = [&](const char* name) {
      const auto* o = sub->get_option_no_throw(name);
      return o != nullptr && o->count() > 0;
    };
    if (given("--n")) cfg.n = parse_n(n_text);
    if (given("--k")) cfg.k = k;
    if (given("--graph")) cfg.graph = graph;
    if (given("--w")) cfg.w = w;
    if (given("--z")) cfg.z = z;
    if (given("--observed")) cfg.observed = observed;
    if (given("--grid-points")) cfg.grid_points = grid;

    Emission em;
    int code = kOk;
    if (cfg.command == "bounds") code = cmd_bounds(cfg, em);
    else if (cfg.command == "table") code = cmd_table(cfg, em);
    else if (cfg.command == "curve") code = cmd_curve(cfg, em);
    else if (cfg.command == "test") code = cmd_test(cfg, em);
    else if (cfg.command == "simulate") code = cmd_simulate(cfg, em);
    else if (cfg.command == "graph-info") code = cmd_graph_info(cfg, em);
    else if (cfg.command == "mean") code = cmd_mean(cfg, em);
    else code = cmd_census(cfg, em);

    if (cfg.out.empty()) {
      write_emission(cfg, em, out);
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw DomainError("cannot open output file '" + cfg.out + "'");
      write_emission(cfg, em, f);
    }
    if (code == kQuadrature)
      err << "quadrature error: some points did not converge; their bounds are widened to [0, 1]\n";
    return code;
  } catch (const QuadratureError& e) {
    err << "quadrature error: " << e.what() << '\n';
    return kQuadrature;
  } catch (const ValidityError& e) {
    err << "validity error: " << e.what() << '\n';
    return kValidity;
  } catch (const GuardError& e) {
    err << "guard error: " << e.what() << '\n';
    return kValidity;
  } catch (const GraphParseError& e) {
    err << "graph parse error: " << e.what() << '\n';
    return kValidity;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kValidity;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"minclique"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace minclique::cli
