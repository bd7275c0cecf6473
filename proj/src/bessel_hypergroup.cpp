#include "kingman/bessel_hypergroup.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "kingman/errors.hpp"
#include "kingman/parallel.hpp"

namespace kingman {

double RadialProfile::l1() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * std::abs(values[i]);
  return s;
}

double RadialProfile::l2() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += grid.weights[i] * values[i] * values[i];
  return std::sqrt(s);
}

double RadialProfile::linf() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void RadialProfile::validate() const {
  if (values.size() != grid.size()) throw DomainError("profile length does not match its grid");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("profile holds a non-finite value");
}

RadialProfile sample_profile(const HalfLineGrid& grid, const std::function<double(double)>& f,
                             DecayClass decay) {
  RadialProfile p{grid, std::vector<double>(grid.size()), decay};
  for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] = f(grid.nodes[i]);
  p.validate();
  return p;
}

RadialProfile resample(const RadialProfile& f, const HalfLineGrid& grid) {
  RadialProfile out{grid, monotone_cubic_resample(f.grid.nodes, f.values, grid.nodes), f.decay};
  // Below the first source node hold the first value.
  for (std::size_t i = 0; i < grid.size() && grid.nodes[i] < f.grid.nodes.front(); ++i)
    out.values[i] = f.values.front();
  return out;
}

namespace {

// Gauss–Jacobi rules in c = cos ω for the weight (1 − c²)^{(ν−3)/2},
// normalized to unit mass. Built once per (ν, n).
const GaussRule& translation_rule(double nu, int n) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nu, n}];
  if (!slot) {
    const double a = 0.5 * (nu - 3.0);
    GaussRule r = gauss_jacobi(n, a, a);
    const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    for (double& w : r.weights) w /= total;
    slot = std::make_unique<GaussRule>(std::move(r));
  }
  return *slot;
}

double apply_rule(const GaussRule& r, double x, double y, const RadialProfile& f) {
  const double s2 = x * x + y * y;
  const double p2 = 2.0 * x * y;
  double acc = 0.0;
  for (std::size_t k = 0; k < r.nodes.size(); ++k) {
    const double z = std::sqrt(std::max(0.0, s2 - p2 * r.nodes[k]));
    acc += r.weights[k] * f.at(z);
  }
  return acc;
}

}  // namespace

double DeltaMeasure::total_mass() const {
  return std::accumulate(masses.begin(), masses.end(), 0.0);
}

double DeltaMeasure::density(double z) const {
  if (atomic || z <= lo || z >= hi) return 0.0;
  const double c = (x * x + y * y - z * z) / (2.0 * x * y);
  if (std::abs(c) >= 1.0) return 0.0;
  const double b = beta_fn(0.5 * (nu - 1.0), 0.5);
  return std::pow(1.0 - c * c, 0.5 * (nu - 3.0)) * z / (x * y * b);
}

DeltaMeasure delta_convolve(const Order& order, const DeltaPair& pair, int n_nodes) {
  if (!(pair.x >= 0.0) || !(pair.y >= 0.0)) throw DomainError("delta locations must be >= 0");
  DeltaMeasure m;
  m.nu = order.nu;
  m.x = pair.x;
  m.y = pair.y;
  m.lo = std::abs(pair.x - pair.y);
  m.hi = pair.x + pair.y;
  if (pair.x == 0.0 || pair.y == 0.0) {
    m.atoms = {m.hi};
    m.masses = {1.0};
    return m;
  }
  if (order.nu == 1.0) {
    m.atoms = {m.lo, m.hi};
    m.masses = {0.5, 0.5};
    return m;
  }
  m.atomic = false;
  const GaussRule& r = translation_rule(order.nu, n_nodes);
  const double s2 = pair.x * pair.x + pair.y * pair.y;
  const double p2 = 2.0 * pair.x * pair.y;
  // Nodes ascend in c, so descend in z.
  for (std::size_t k = r.nodes.size(); k-- > 0;) {
    const double z = std::sqrt(std::max(0.0, s2 - p2 * r.nodes[k]));
    m.atoms.push_back(std::clamp(z, m.lo, m.hi));
    m.masses.push_back(r.weights[k]);
  }
  return m;
}

namespace {

double translate_scaled(const Order& order, double x, double y, const RadialProfile& f,
                        double scale, const TranslateOptions& opt) {
  if (!(x >= 0.0) || !(y >= 0.0)) throw DomainError("translation arguments must be >= 0");
  if (x == 0.0) return f.at(y);
  if (y == 0.0) return f.at(x);
  if (order.nu == 1.0) return 0.5 * (f.at(x + y) + f.at(std::abs(x - y)));
  if (std::abs(x - y) > f.grid.x_max || scale == 0.0) return 0.0;

  int n = opt.min_nodes;
  double prev = apply_rule(translation_rule(order.nu, n), x, y, f);
  while (n < opt.max_nodes) {
    n *= 2;
    const double cur = apply_rule(translation_rule(order.nu, n), x, y, f);
    if (std::abs(cur - prev) <= opt.rel_tol * scale) return cur;
    prev = cur;
  }
  throw NonConvergent("translation quadrature did not converge at x=" + std::to_string(x) +
                      ", y=" + std::to_string(y));
}

}  // namespace

double hankel_translate_at(const Order& order, double x, double y, const RadialProfile& f,
                           const TranslateOptions& opt) {
  return translate_scaled(order, x, y, f, f.linf(), opt);
}

RadialProfile hankel_translate(const Order& order, double x, const RadialProfile& f,
                               const TranslateOptions& opt) {
  f.validate();
  RadialProfile out{f.grid, std::vector<double>(f.grid.size()), f.decay};
  const double scale = f.linf();
  // Pre-fill the rule cache on this thread.
  if (order.nu != 1.0)
    for (int n = opt.min_nodes; n <= opt.max_nodes; n *= 2) translation_rule(order.nu, n);
  parallel_for(f.grid.size(), [&](std::size_t i) {
    out.values[i] = translate_scaled(order, x, f.grid.nodes[i], f, scale, opt);
  });
  return out;
}

RadialProfile hankel_convolve(const Order& order, const RadialProfile& f, const RadialProfile& g,
                              const std::optional<HalfLineGrid>& out_grid,
                              const TranslateOptions& opt) {
  f.validate();
  g.validate();
  const HalfLineGrid& grid = out_grid ? *out_grid : f.grid;
  RadialProfile out{grid, std::vector<double>(grid.size(), 0.0), f.decay};
  if (order.nu != 1.0)
    for (int n = opt.min_nodes; n <= opt.max_nodes; n *= 2) translation_rule(order.nu, n);
  std::vector<double> wg(g.grid.size());
  for (std::size_t j = 0; j < wg.size(); ++j) wg[j] = g.grid.weights[j] * g.values[j];
  const double gmax = g.linf();
  const double fmax = f.linf();
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid.nodes[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < wg.size(); ++j) {
      if (std::abs(g.values[j]) <= 1e-300 * gmax || wg[j] == 0.0) continue;
      acc += wg[j] * translate_scaled(order, x, g.grid.nodes[j], f, fmax, opt);
    }
    out.values[i] = acc;
  });
  return out;
}

double truncation_tail(const RadialProfile& f) {
  const double total = f.l1();
  if (total == 0.0) return 0.0;
  const HalfLineGrid& g = f.grid;
  const std::size_t p = static_cast<std::size_t>(g.panel_order);
  const std::size_t last = g.size() - 1;
  const std::size_t first = last + 1 - p;
  const double a = g.breaks[g.panels() - 1];
  const double b = g.x_max;
  double m = 0.0;
  for (std::size_t i = first; i <= last; ++i) m = std::max(m, std::abs(f.values[i]));
  if (m == 0.0) return 0.0;
  if (f.decay != DecayClass::polynomial) return m * std::pow(b, g.nu - 1.0) * (b - a) / total;
  const double v0 = std::abs(f.values[first]);
  const double v1 = std::abs(f.values[last]);
  if (v1 == 0.0) return 0.0;
  const double x0 = g.nodes[first];
  const double x1 = g.nodes[last];
  const double power = v0 > 0.0 ? -std::log(v1 / v0) / std::log(x1 / x0) : 0.0;
  if (!(power > g.nu)) return std::numeric_limits<double>::infinity();
  return v1 * std::pow(x1, g.nu) / (power - g.nu) / total;
}

RadialProfile hankel_transform(const Order& order, const RadialProfile& f,
                               const std::optional<HalfLineGrid>& out_grid,
                               const TransformOptions& opt) {
  f.validate();
  if (std::abs(f.grid.nu - order.nu) > 1e-14)
    throw DomainError("profile grid order does not match the transform order");
  const double tail = truncation_tail(f);
  if (tail > opt.tail_tol)
    throw NonConvergent("profile is not negligible at x_max (relative tail " +
                        std::to_string(tail) + ")");
  const HalfLineGrid& grid = out_grid ? *out_grid : f.grid;
  std::vector<double> wf;
  std::vector<double> ys;
  for (std::size_t j = 0; j < f.grid.size(); ++j) {
    if (f.values[j] == 0.0) continue;
    wf.push_back(f.grid.weights[j] * f.values[j]);
    ys.push_back(f.grid.nodes[j]);
  }
  RadialProfile out{grid, std::vector<double>(grid.size(), 0.0), f.decay};
  parallel_for(grid.size(), [&](std::size_t i) {
    const double x = grid.nodes[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < wf.size(); ++j) acc += wf[j] * j_kernel(order, x * ys[j]);
    out.values[i] = acc;
  });
  return out;
}

RadialProfile hankel_inverse(const Order& order, const RadialProfile& g,
                             const std::optional<HalfLineGrid>& out_grid,
                             const TransformOptions& opt) {
  RadialProfile out = hankel_transform(order, g, out_grid, opt);
  const double s = 1.0 / (order.kappa * order.kappa);
  for (double& v : out.values) v *= s;
  return out;
}

namespace {

BesselMultiplierKernel multiplier_from_samples(const Order& order, RadialProfile symbol,
                                               const HalfLineGrid& out_grid) {
  BesselMultiplierKernel r;
  const double k2 = order.kappa * order.kappa;
  double sq = 0.0;
  for (std::size_t j = 0; j < symbol.values.size(); ++j)
    sq += symbol.grid.weights[j] * symbol.values[j] * symbol.values[j];
  if (!std::isfinite(sq)) throw DomainError("multiplier is not square integrable on the grid");
  r.plancherel_l2sq = sq / k2;
  if (sq == 0.0) {
    r.kernel = RadialProfile{out_grid, std::vector<double>(out_grid.size(), 0.0), symbol.decay};
    return r;
  }
  RadialProfile squared = symbol;
  for (double& v : squared.values) v *= v;
  if (truncation_tail(squared) > 1e-6)
    throw DomainError("weighted L2 norm of the multiplier does not converge on the grid");
  TransformOptions opt;
  opt.tail_tol = 1e-6;
  r.kernel = hankel_inverse(order, symbol, out_grid, opt);
  const double l2 = r.kernel.l2();
  r.measured_l2sq = l2 * l2;
  return r;
}

}  // namespace

BesselMultiplierKernel bessel_multiplier_kernel(const Order& order,
                                                const std::function<double(double)>& F,
                                                const HalfLineGrid& spectral_grid,
                                                const HalfLineGrid& out_grid) {
  RadialProfile symbol =
      sample_profile(spectral_grid, [&](double y) { return F(y * y); }, DecayClass::exponential);
  return multiplier_from_samples(order, std::move(symbol), out_grid);
}

BesselMultiplierKernel bessel_multiplier_kernel(const Order& order,
                                                const std::vector<double>& lambda,
                                                const std::vector<double>& values,
                                                const HalfLineGrid& spectral_grid,
                                                const HalfLineGrid& out_grid) {
  if (lambda.size() != values.size() || lambda.size() < 2)
    throw DomainError("sampled multiplier needs matching lambda and value arrays");
  for (std::size_t k = 1; k < lambda.size(); ++k)
    if (!(lambda[k] > lambda[k - 1])) throw DomainError("lambda samples must increase");
  std::vector<double> zs(spectral_grid.size());
  for (std::size_t j = 0; j < zs.size(); ++j)
    zs[j] = std::max(lambda.front(), spectral_grid.nodes[j] * spectral_grid.nodes[j]);
  RadialProfile symbol{spectral_grid, monotone_cubic_resample(lambda, values, zs),
                       DecayClass::exponential};
  return multiplier_from_samples(order, std::move(symbol), out_grid);
}

double bessel_heat_value(const Order& order, double t, double x) {
  return 2.0 / (std::tgamma(0.5 * order.nu) * std::pow(4.0 * t, 0.5 * order.nu)) *
         std::exp(-x * x / (4.0 * t));
}

RadialProfile bessel_heat_kernel(const Order& order, double t, const HalfLineGrid& out_grid) {
  if (!(t > 0.0)) throw DomainError("heat time must be positive");
  return sample_profile(out_grid, [&](double x) { return bessel_heat_value(order, t, x); });
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (...) {
    throw ParseError("malformed number for " + what + ": '" + s + "'");
  }
}

}  // namespace

void write_profile(std::ostream& os, const RadialProfile& f) {
  os << "# kingman profile\n";
  os << "# nu=" << fmt17(f.grid.nu) << "\n";
  os << "# x_max=" << fmt17(f.grid.x_max) << "\n";
  os << "# decay=" << to_string(f.decay) << "\n";
  os << "# layout=" << to_string(f.grid.layout) << "\n";
  os << "# panel_order=" << f.grid.panel_order << "\n";
  os << "# breaks=";
  for (std::size_t k = 0; k < f.grid.breaks.size(); ++k)
    os << (k ? "," : "") << fmt17(f.grid.breaks[k]);
  os << "\nx,value\n";
  for (std::size_t i = 0; i < f.values.size(); ++i)
    os << fmt17(f.grid.nodes[i]) << "," << fmt17(f.values[i]) << "\n";
}

RadialProfile read_profile(std::istream& is) {
  std::map<std::string, std::string> header;
  std::vector<double> xs;
  std::vector<double> vs;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      header[key] = line.substr(eq + 1);
      continue;
    }
    if (line == "x,value") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("profile row lacks a comma: '" + line + "'");
    xs.push_back(parse_double(line.substr(0, comma), "node"));
    vs.push_back(parse_double(line.substr(comma + 1), "value"));
  }
  if (!header.count("nu")) throw ParseError("profile header lacks nu");
  if (xs.size() < 2) throw ParseError("profile has fewer than two rows");
  const double nu = parse_double(header["nu"], "nu");
  if (!(nu >= 1.0)) throw DomainError("order nu must be >= 1");
  const DecayClass decay =
      header.count("decay") ? parse_decay_class(header["decay"]) : DecayClass::gaussian;
  const GridLayout layout =
      header.count("layout") ? parse_layout(header["layout"]) : GridLayout::composite;

  if (header.count("breaks") && header.count("panel_order")) {
    std::vector<double> breaks;
    std::stringstream ss(header["breaks"]);
    std::string item;
    while (std::getline(ss, item, ',')) breaks.push_back(parse_double(item, "breaks"));
    const int p = static_cast<int>(parse_double(header["panel_order"], "panel_order"));
    HalfLineGrid grid = grid_from_breaks(nu, std::move(breaks), p, layout);
    if (grid.size() != xs.size()) throw ParseError("profile rows do not match the declared grid");
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::abs(grid.nodes[i] - xs[i]) > 1e-12 * std::max(1.0, xs[i]))
        throw ParseError("profile nodes do not match the declared grid");
    RadialProfile f{std::move(grid), std::move(vs), decay};
    f.validate();
    return f;
  }
  // Free-form samples: resample onto a default grid.
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ParseError("profile nodes must increase");
  if (xs.front() < 0.0) throw ParseError("profile nodes must be >= 0");
  const double x_max = header.count("x_max") ? parse_double(header["x_max"], "x_max") : xs.back();
  HalfLineGrid grid = build_grid(nu, x_max, std::max<int>(8, static_cast<int>(xs.size())), layout);
  RadialProfile f{grid, monotone_cubic_resample(xs, vs, grid.nodes), decay};
  for (std::size_t i = 0; i < grid.size() && grid.nodes[i] < xs.front(); ++i)
    f.values[i] = vs.front();
  f.validate();
  return f;
}

void save_profile(const std::string& path, const RadialProfile& f) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  write_profile(os, f);
}

RadialProfile load_profile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path + "'");
  return read_profile(is);
}

}  // namespace kingman
