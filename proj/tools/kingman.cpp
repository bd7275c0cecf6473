// kingman: command-line front end for the Bessel–Kingman library.
//
// Exit codes: 0 ok, 1 a check failed, 2 parse or domain error,
// 3 a numerical method did not converge.

#include <CLI11.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kingman/bessel_hypergroup.hpp"
#include "kingman/errors.hpp"
#include "kingman/gnu_calculus.hpp"
#include "kingman/gnu_geometry.hpp"
#include "kingman/numerics.hpp"
#include "kingman/specfun.hpp"
#include "kingman/verification.hpp"

namespace {

using namespace kingman;
namespace pt = boost::property_tree;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kBadInput = 2;
constexpr int kNonConvergent = 3;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) throw ParseError("empty value for " + what);
  double v = 0.0;
  const char* first = s.data() + a;
  const char* last = s.data() + b + 1;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ParseError("malformed number for " + what + ": '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (s.find_first_not_of(" \t") == std::string::npos) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
  return out;
}

GPoint parse_point(const std::string& s, const std::string& what) {
  std::string body = s;
  if (!body.empty() && body.front() == '(' && body.back() == ')') body = body.substr(1, body.size() - 2);
  const std::vector<double> v = parse_list(body, what);
  if (v.size() != 2) throw ParseError(what + " must be 'x,u', got '" + s + "'");
  if (v[0] < 0.0) throw DomainError(what + " needs x >= 0");
  return {v[0], v[1]};
}

// Flags given on the command line win over the INI file; the file wins over defaults.
struct Settings {
  pt::ptree ini;

  std::optional<std::string> get(const std::string& key) const {
    if (auto v = ini.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }
  double number(const std::string& key, double fallback) const {
    if (auto v = get(key)) return parse_double(*v, key);
    return fallback;
  }
  int integer(const std::string& key, int fallback) const {
    if (auto v = get(key)) {
      const double d = parse_double(*v, key);
      if (d != std::floor(d)) throw ParseError(key + " must be an integer");
      return static_cast<int>(d);
    }
    return fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return get(key).value_or(fallback);
  }
  bool flag(const std::string& key, bool fallback) const {
    if (auto v = get(key)) {
      if (*v == "true" || *v == "1" || *v == "yes") return true;
      if (*v == "false" || *v == "0" || *v == "no") return false;
      throw ParseError(key + " must be true or false");
    }
    return fallback;
  }
};

struct Common {
  std::string config;
  std::string out;
  std::optional<double> nu;
  std::optional<double> t;
  std::optional<double> tol;
};

struct Run {
  Settings s;
  Common c;

  double nu(double fallback = 2.0) const { return c.nu ? *c.nu : s.number("run.nu", fallback); }
  double t(double fallback = 1.0) const { return c.t ? *c.t : s.number("run.t", fallback); }
  double tol(const std::string& key, double fallback) const {
    return c.tol ? *c.tol : s.number(key, fallback);
  }
  std::string out() const { return c.out.empty() ? s.text("run.out", "") : c.out; }
};

void check_nodes(int n, const std::string& what) {
  if (n < 8) throw DomainError(what + " must be >= 8");
}

// [grid] overrides for a half-line grid.
HalfLineGrid half_grid(const Run& r, double nu, double x_max, int n_nodes) {
  const double xm = r.s.number("grid.x_max", x_max);
  const int n = r.s.integer("grid.n_nodes", n_nodes);
  check_nodes(n, "grid.n_nodes");
  GridOptions go;
  go.panel_order = r.s.integer("grid.panel_order", 12);
  go.x_min = r.s.number("grid.x_min", 0.0);
  return build_grid(nu, xm, n, parse_layout(r.s.text("grid.layout", "composite")), go);
}

bool has_plane_overrides(const Run& r) {
  for (const char* k : {"grid.x_max", "grid.n_nodes", "grid.layout", "grid.u_max", "grid.n_u"})
    if (r.s.get(k)) return true;
  return false;
}

PlaneGrid plane_grid(const Run& r, double nu, const PlaneGrid& fallback) {
  if (!has_plane_overrides(r)) return fallback;
  const HalfLineGrid xg = half_grid(r, nu, fallback.x_grid.x_max, static_cast<int>(fallback.nx()));
  const int n_u = r.s.integer("grid.n_u", static_cast<int>(fallback.nu_nodes()));
  check_nodes(n_u, "grid.n_u");
  return build_plane(xg, r.s.number("grid.u_max", fallback.u_max), n_u);
}

// Data go to --out; the summary goes to stdout, or to stderr when the data use stdout.
struct Sink {
  std::ofstream file;
  bool to_file = false;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw ParseError("cannot open '" + path + "' for writing");
    to_file = true;
  }
  std::ostream& data() { return to_file ? static_cast<std::ostream&>(file) : std::cout; }
  std::ostream& summary() { return to_file ? std::cout : std::cerr; }
};

HeatMethod parse_method(const std::string& s) {
  if (s == "psi") return HeatMethod::psi;
  if (s == "contour") return HeatMethod::contour;
  throw ParseError("heat method must be psi or contour, got '" + s + "'");
}

int cmd_hankel(const Run& r, const std::string& input_flag, bool inverse_flag) {
  const std::string input = input_flag.empty() ? r.s.text("hankel.input", "") : input_flag;
  if (input.empty()) throw ParseError("hankel needs an input profile (--in)");
  const RadialProfile f = load_profile(input);
  const double nu = r.c.nu ? *r.c.nu : f.grid.nu;
  if (nu != f.grid.nu) throw DomainError("--nu " + fmt(nu) + " does not match the profile order " + fmt(f.grid.nu));
  const Order o = make_order(nu);
  TransformOptions opt;
  opt.tail_tol = r.tol("hankel.tail_tol", opt.tail_tol);
  const bool inverse = inverse_flag || r.s.flag("hankel.inverse", false);
  const RadialProfile g = inverse ? hankel_inverse(o, f, std::nullopt, opt) : hankel_transform(o, f, std::nullopt, opt);
  Sink sink(r.out());
  write_profile(sink.data(), g);
  sink.summary() << "transform = " << (inverse ? "inverse" : "forward") << "\n"
                 << "nu = " << fmt(nu) << "\n"
                 << "truncation_tail = " << fmt(truncation_tail(f)) << "\n";
  return kOk;
}

int cmd_heat(const Run& r, const std::string& target_flag, const std::string& method_flag) {
  const double nu = r.nu();
  const double t = r.t();
  const Order o = make_order(nu);
  if (!(t > 0.0)) throw DomainError("heat time must be positive");
  if (t < kPsiTMin)
    throw NonConvergent("heat kernels are not resolved below t_min = " + fmt(kPsiTMin) + " (t = " + fmt(t) + ")");
  const std::string target = target_flag.empty() ? r.s.text("heat.target", "G") : target_flag;
  const double tol = r.tol("heat.mass_tol", 1e-3);
  Sink sink(r.out());
  double mass = 0.0;
  if (target == "X") {
    const HalfLineGrid g = half_grid(r, nu, 12.0 * std::sqrt(t) + 4.0, 400);
    const RadialProfile k = bessel_heat_kernel(o, t, g);
    write_profile(sink.data(), k);
    mass = k.integral();
  } else if (target == "G") {
    const HeatMethod method = parse_method(method_flag.empty() ? r.s.text("heat.method", "psi") : method_flag);
    const PlaneGrid pl = plane_grid(r, nu, heat_plane(nu, t));
    const HeatKernelResult k = g_heat_kernel(o, t, pl, method);
    write_field(sink.data(), k.field);
    mass = k.field.integral();
    sink.summary() << "min_value = " << fmt(k.min_value) << "\n";
  } else {
    throw ParseError("heat target must be X or G, got '" + target + "'");
  }
  sink.summary() << "target = " << target << "\n"
                 << "nu = " << fmt(nu) << "\n"
                 << "t = " << fmt(t) << "\n"
                 << "mass = " << fmt(mass) << "\n"
                 << "mass_error = " << fmt(std::abs(mass - 1.0)) << "\n";
  return std::abs(mass - 1.0) <= tol ? kOk : kCheckFailed;
}

// Mixture terms "c:t, c:t, ..." or a two-column "lambda,value" sample file.
ExpMixMultiplier read_multiplier(const Run& r, const std::string& terms_flag, const std::string& file_flag,
                                 double nu) {
  const std::string terms = terms_flag.empty() ? r.s.text("multiplier.terms", "") : terms_flag;
  const std::string file = file_flag.empty() ? r.s.text("multiplier.samples", "") : file_flag;
  if (!terms.empty() && !file.empty()) throw ParseError("give either mixture terms or a sample file, not both");
  ExpMixMultiplier F;
  if (!terms.empty()) {
    std::stringstream ss(terms);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw ParseError("mixture term must be 'c:t', got '" + item + "'");
      F.terms.emplace_back(parse_double(item.substr(0, colon), "mixture coefficient"),
                           parse_double(item.substr(colon + 1), "mixture rate"));
    }
    if (F.terms.empty()) throw ParseError("mixture has no terms");
    F.validate();
    return F;
  }
  if (file.empty()) throw ParseError("kernel needs --terms or --samples");
  std::ifstream is(file);
  if (!is) throw ParseError("cannot open '" + file + "'");
  std::vector<double> lambda;
  std::vector<double> values;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line == "lambda,value") continue;
    const std::vector<double> v = parse_list(line, "sample row");
    if (v.size() != 2) throw ParseError("sample row must be 'lambda,value', got '" + line + "'");
    lambda.push_back(v[0]);
    values.push_back(v[1]);
  }
  ProjectionOptions po;
  po.nu = nu;
  return project_to_expmix(lambda, values, r.s.integer("multiplier.n_terms", 12),
                           r.s.number("multiplier.t_lo", 0.01), r.s.number("multiplier.t_hi", 100.0), po);
}

int cmd_kernel(const Run& r, const std::string& terms, const std::string& samples, const std::string& path_flag) {
  const double nu = r.nu();
  const Order o = make_order(nu);
  const ExpMixMultiplier F = read_multiplier(r, terms, samples, nu);
  const std::string path = path_flag.empty() ? r.s.text("kernel.path", "linearity") : path_flag;
  MultiplierPath mp;
  if (path == "linearity") mp = MultiplierPath::linearity;
  else if (path == "transference") mp = MultiplierPath::transference;
  else throw ParseError("kernel path must be linearity or transference, got '" + path + "'");
  const PlaneGrid pl = plane_grid(r, nu, interior_plane(nu));
  const KernelField K = multiplier_kernel(o, F, pl, mp);
  Sink sink(r.out());
  write_field(sink.data(), K);
  std::ostream& s = sink.summary();
  s << "nu = " << fmt(nu) << "\n";
  for (std::size_t j = 0; j < F.terms.size(); ++j)
    s << "term" << j << " = " << fmt(F.terms[j].first) << ":" << fmt(F.terms[j].second) << "\n";
  s << "residual = " << fmt(F.residual) << "\n"
    << "l1 = " << fmt(K.l1()) << "\n"
    << "l2 = " << fmt(K.l2()) << "\n"
    << "l2_radial = " << fmt(std::sqrt(expmix_kernel_l2sq(o, F))) << "\n";
  return F.residual <= r.tol("multiplier.residual_tol", 1e-6) ? kOk : kCheckFailed;
}

int cmd_dist(const Run& r, const std::string& p_flag, const std::string& q_flag, std::optional<double> ball) {
  const double nu = r.nu();
  const Order o = make_order(nu);
  const std::string ps = p_flag.empty() ? r.s.text("dist.p", "") : p_flag;
  const std::string qs = q_flag.empty() ? r.s.text("dist.q", "0,0") : q_flag;
  if (!ball && r.s.get("dist.ball")) ball = r.s.number("dist.ball", 0.0);
  if (ps.empty() && !ball) throw ParseError("dist needs a point (--p) or a ball radius (--ball)");
  std::ostringstream os;
  os << "nu = " << fmt(nu) << "\n";
  if (!ps.empty()) {
    const GPoint p = parse_point(ps, "point p");
    const GPoint q = parse_point(qs, "point q");
    os << "distance = " << fmt(distance(p, q)) << "\n"
       << "norm_p = " << fmt(gnorm(p)) << "\n"
       << "norm_q = " << fmt(gnorm(q)) << "\n";
  }
  if (ball) {
    if (!(*ball > 0.0)) throw DomainError("ball radius must be positive");
    os << "ball_radius = " << fmt(*ball) << "\n"
       << "ball_volume = " << fmt(radial_integrate(o, [](double) { return 1.0; }, *ball)) << "\n";
  }
  Sink sink(r.out());
  sink.data() << os.str();
  return kOk;
}

int cmd_check(const Run& r, const std::optional<std::string>& nus_flag, const std::optional<std::string>& ts_flag,
              double kappa_fault) {
  std::vector<double> nus = parse_list(nus_flag.value_or(r.s.text("check.nus", "1,1.5,2,3")), "check.nus");
  std::vector<double> ts = parse_list(ts_flag.value_or(r.s.text("check.ts", "0.5,1,2")), "check.ts");
  if (r.c.nu) nus = {*r.c.nu};
  if (r.c.t) ts = {*r.c.t};
  for (double nu : nus) make_order(nu);
  for (double t : ts)
    if (!(t > 0.0)) throw DomainError("check times must be positive");
  SuiteConfig cfg;
  cfg.kappa_fault = kappa_fault;
  cfg.hankel_tol = r.tol("check.hankel_tol", cfg.hankel_tol);
  cfg.mass_tol = r.s.number("check.mass_tol", cfg.mass_tol);
  cfg.two_path_tol = r.s.number("check.two_path_tol", cfg.two_path_tol);
  cfg.semigroup_tol = r.s.number("check.semigroup_tol", cfg.semigroup_tol);
  cfg.radiality_tol = r.s.number("check.radiality_tol", cfg.radiality_tol);
  cfg.radial_tol = r.s.number("check.radial_tol", cfg.radial_tol);
  cfg.plancherel_band = r.s.number("check.plancherel_band", cfg.plancherel_band);
  cfg.translation_tol = r.s.number("check.translation_tol", cfg.translation_tol);
  cfg.wave = r.s.flag("check.wave", cfg.wave);
  cfg.plancherel = r.s.flag("check.plancherel", cfg.plancherel);
  const std::vector<CheckReport> reports = run_suite(nus, ts, cfg);
  Sink sink(r.out());
  write_reports(sink.data(), reports);
  std::size_t failed = 0;
  for (const CheckReport& c : reports) failed += c.pass ? 0 : 1;
  sink.summary() << "checks = " << reports.size() << "\n"
                 << "failed = " << failed << "\n";
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_wave(const Run& r, std::optional<double> h_flag, int halvings_flag, const std::string& center_flag) {
  const double nu = r.nu();
  const Order o = make_order(nu);
  PropagationOptions base;
  base.h = h_flag ? *h_flag : r.s.number("wave.h", base.h);
  base.T = r.c.t ? *r.c.t : r.s.number("wave.T", base.T);
  base.x_max = r.s.number("wave.x_max", base.x_max);
  base.u_max = r.s.number("wave.u_max", base.u_max);
  base.r0 = r.s.number("wave.r0", base.r0);
  base.cut = r.s.number("wave.cut", base.cut);
  base.threshold = r.s.number("wave.threshold", base.threshold);
  base.n_times = r.s.integer("wave.n_times", base.n_times);
  const std::string cs = center_flag.empty() ? r.s.text("wave.center", "0,0") : center_flag;
  base.center = parse_point(cs, "wave center");
  if (!(base.h > 0.0) || !(base.T > 0.0)) throw DomainError("wave needs h > 0 and T > 0");
  const int halvings = halvings_flag >= 0 ? halvings_flag : r.s.integer("wave.halvings", 0);
  if (halvings < 0) throw DomainError("wave.halvings must be >= 0");
  const double factor = r.tol("wave.violation_factor", 3.0);

  std::vector<PropagationResult> runs;
  for (int k = 0; k <= halvings; ++k) {
    PropagationOptions opt = base;
    opt.h = base.h / std::pow(2.0, k);
    runs.push_back(propagation_study(o, opt));
  }
  Sink sink(r.out());
  std::ostream& d = sink.data();
  d << "# kingman wave\n# nu=" << fmt(nu) << "\nh,time,violation\n";
  for (const PropagationResult& p : runs)
    for (std::size_t i = 0; i < p.times.size(); ++i)
      d << fmt(p.h) << "," << fmt(p.times[i]) << "," << fmt(p.violation[i]) << "\n";
  std::ostream& s = sink.summary();
  s << "nu = " << fmt(nu) << "\n";
  for (const PropagationResult& p : runs)
    s << "h = " << fmt(p.h) << " violation = " << fmt(p.violation.back())
      << " energy_drift = " << fmt(p.energy_drift) << "\n";
  bool ok = runs.front().violation.back() <= factor * runs.front().h;
  for (std::size_t k = 1; k < runs.size(); ++k)
    ok = ok && runs[k].violation.back() <= 0.5 * runs[k - 1].violation.back() + 1e-12;
  s << "status = " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel-Kingman hypergroup and its extension G_nu: transforms, kernels, geometry, checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  double nu_v = 0.0;
  double t_v = 0.0;
  double tol_v = 0.0;
  app.add_option("--config", common.config, "INI configuration file");
  app.add_option("--out", common.out, "output path (default stdout)");
  auto* nu_opt = app.add_option("--nu", nu_v, "order nu >= 1");
  auto* t_opt = app.add_option("--t", t_v, "time");
  auto* tol_opt = app.add_option("--tol", tol_v, "tolerance of the command's pass criterion");

  auto* hankel = app.add_subcommand("hankel", "Hankel transform of a profile file");
  std::string h_in;
  bool h_inverse = false;
  hankel->add_option("--in", h_in, "input profile");
  hankel->add_flag("--inverse", h_inverse, "apply the inverse transform");

  auto* heat = app.add_subcommand("heat", "heat kernel of L_nu (target X) or Delta_nu (target G)");
  std::string heat_target;
  std::string heat_method;
  heat->add_option("--target", heat_target, "X or G");
  heat->add_option("--method", heat_method, "psi or contour (target G)");

  auto* kernel = app.add_subcommand("kernel", "kernel of an exponential-mixture multiplier of Delta_nu");
  std::string k_terms;
  std::string k_samples;
  std::string k_path;
  kernel->add_option("--terms", k_terms, "mixture 'c:t,c:t,...'");
  kernel->add_option("--samples", k_samples, "file of 'lambda,value' rows to project");
  kernel->add_option("--path", k_path, "linearity or transference");

  auto* dist = app.add_subcommand("dist", "distance, norm and ball volume on G_nu");
  std::string d_p;
  std::string d_q;
  double d_ball = 0.0;
  dist->add_option("--p", d_p, "point 'x,u'");
  dist->add_option("--q", d_q, "point 'x,u' (default 0,0)");
  auto* ball_opt = dist->add_option("--ball", d_ball, "ball radius");

  auto* check = app.add_subcommand("check", "run the verification suite");
  std::string c_nus;
  std::string c_ts;
  double kappa_fault = 1.0;
  auto* nus_opt = check->add_option("--nus", c_nus, "comma-separated orders");
  auto* ts_opt = check->add_option("--ts", c_ts, "comma-separated times");
  check->add_option("--kappa-fault", kappa_fault)->group("");

  auto* wave = app.add_subcommand("wave", "finite propagation speed study");
  double w_h = 0.0;
  int w_halvings = -1;
  std::string w_center;
  auto* wh_opt = wave->add_option("--step", w_h, "base grid step h");
  wave->add_option("--halvings", w_halvings, "number of step halvings");
  wave->add_option("--center", w_center, "bump center 'x,u'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  try {
    Run r;
    r.c = common;
    if (*nu_opt) r.c.nu = nu_v;
    if (*t_opt) r.c.t = t_v;
    if (*tol_opt) r.c.tol = tol_v;
    if (!common.config.empty()) {
      std::ifstream is(common.config);
      if (!is) throw ParseError("cannot open config '" + common.config + "'");
      try {
        pt::read_ini(is, r.s.ini);
      } catch (const pt::ini_parser_error& e) {
        throw ParseError("config: " + e.message() + " at line " + std::to_string(e.line()));
      }
    }
    if (*hankel) return cmd_hankel(r, h_in, h_inverse);
    if (*heat) return cmd_heat(r, heat_target, heat_method);
    if (*kernel) return cmd_kernel(r, k_terms, k_samples, k_path);
    if (*dist) return cmd_dist(r, d_p, d_q, *ball_opt ? std::optional<double>(d_ball) : std::nullopt);
    if (*check)
      return cmd_check(r, *nus_opt ? std::optional<std::string>(c_nus) : std::nullopt,
                       *ts_opt ? std::optional<std::string>(c_ts) : std::nullopt, kappa_fault);
    if (*wave) return cmd_wave(r, *wh_opt ? std::optional<double>(w_h) : std::nullopt, w_halvings, w_center);
  } catch (const ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return kBadInput;
  } catch (const DomainError& e) {
    std::cerr << "DomainError: " << e.what() << "\n";
    return kBadInput;
  } catch (const NonConvergent& e) {
    std::cerr << "NonConvergent: " << e.what() << "\n";
    return kNonConvergent;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
