#include "kingman/gnu_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <Eigen/Dense>
#include <fstream>
#include <map>
#include <sstream>

#include "kingman/errors.hpp"
#include "kingman/parallel.hpp"

namespace kingman {

GPoint inverse(const GPoint& p) { return {std::exp(-p.u) * p.x, -p.u}; }

double modular(const Order& order, const GPoint& p) { return std::exp(-order.nu * p.u); }

double gnorm_cosh_m1(double x, double u) {
  const double s = std::sinh(0.5 * u);
  return 2.0 * s * s + 0.5 * x * x * std::exp(-u);
}

double distance(const GPoint& p, const GPoint& q) {
  const double s = std::sinh(0.5 * (p.u - q.u));
  const double dx = p.x - q.x;
  return arccosh1p(2.0 * s * s + 0.5 * dx * dx * std::exp(-(p.u + q.u)));
}

double gnorm(const GPoint& p) { return arccosh1p(gnorm_cosh_m1(p.x, p.u)); }

namespace {

// Row of f at height w, with cubic Lagrange interpolation between rows.
std::vector<double> row_at(const KernelField& f, double w) {
  const PlaneGrid& pl = f.plane;
  const std::size_t nx = pl.nx();
  const std::size_t nu = pl.nu_nodes();
  std::vector<double> out(nx, 0.0);
  const double s = (w + pl.u_max) / pl.u_step;
  const double eps = 1e-9;
  if (s < -eps || s > static_cast<double>(nu - 1) + eps) return out;
  const double r = std::round(s);
  if (std::abs(s - r) <= eps) {
    const std::size_t iu = static_cast<std::size_t>(r);
    std::copy_n(f.values.begin() + static_cast<long>(pl.index(iu, 0)), nx, out.begin());
    return out;
  }
  const std::size_t m = std::min<std::size_t>(4, nu);
  const long base = std::clamp(static_cast<long>(std::floor(s)) - 1, 0L, static_cast<long>(nu - m));
  for (std::size_t a = 0; a < m; ++a) {
    double c = 1.0;
    for (std::size_t b = 0; b < m; ++b)
      if (b != a) c *= (s - static_cast<double>(base + static_cast<long>(b))) / (static_cast<double>(a) - static_cast<double>(b));
    const std::size_t iu = static_cast<std::size_t>(base) + a;
    for (std::size_t ix = 0; ix < nx; ++ix) out[ix] += c * f.at(iu, ix);
  }
  return out;
}

void check_same_plane(const KernelField& f, const KernelField& g) {
  if (f.plane.nx() != g.plane.nx() || f.plane.nu_nodes() != g.plane.nu_nodes() ||
      std::abs(f.plane.u_step - g.plane.u_step) > 1e-12 ||
      std::abs(f.plane.x_grid.x_max - g.plane.x_grid.x_max) > 1e-12)
    throw DomainError("fields must share one plane grid");
}

}  // namespace

double KernelField::value_at(double x, double u) const {
  if (x < 0.0 || x > plane.x_grid.x_max) return 0.0;
  if (u < -plane.u_max - 1e-12 || u > plane.u_max + 1e-12) return 0.0;
  const std::vector<double> r = row_at(*this, u);
  return plane.x_grid.interpolate(r, x);
}

std::vector<double> KernelField::row(std::size_t iu) const {
  const auto first = values.begin() + static_cast<long>(plane.index(iu, 0));
  return std::vector<double>(first, first + static_cast<long>(plane.nx()));
}

double KernelField::lp_norm(double p) const {
  if (std::isinf(p)) return linf();
  if (!(p >= 1.0)) throw DomainError("Lp exponent must be >= 1");
  double s = 0.0;
  for (std::size_t iu = 0; iu < plane.nu_nodes(); ++iu) {
    double row_sum = 0.0;
    for (std::size_t ix = 0; ix < plane.nx(); ++ix)
      row_sum += plane.x_grid.weights[ix] * std::pow(std::abs(at(iu, ix)), p);
    s += plane.u_weights[iu] * row_sum;
  }
  return std::pow(s, 1.0 / p);
}

double KernelField::linf() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void KernelField::validate() const {
  if (values.size() != plane.size()) throw DomainError("field length does not match its plane");
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("field holds a non-finite value");
}

KernelField sample_field(const PlaneGrid& plane, double nu,
                         const std::function<double(double, double)>& f) {
  KernelField k{plane, std::vector<double>(plane.size()), nu};
  for (std::size_t iu = 0; iu < plane.nu_nodes(); ++iu)
    for (std::size_t ix = 0; ix < plane.nx(); ++ix)
      k.at(iu, ix) = f(plane.x_grid.nodes[ix], plane.u_nodes[iu]);
  k.validate();
  return k;
}

double relative_lp_error(const KernelField& a, const KernelField& b, double p) {
  check_same_plane(a, b);
  KernelField d = a;
  for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
  const double ref = b.lp_norm(p);
  return ref > 0.0 ? d.lp_norm(p) / ref : d.lp_norm(p);
}

namespace {

enum class Side { left, right };

KernelField translate_field(const Order& order, const GPoint& p, const KernelField& f,
                            const GTranslateOptions& opt, Side side) {
  f.validate();
  if (!(p.x >= 0.0)) throw DomainError("translation point needs x >= 0");
  const PlaneGrid& pl = f.plane;
  const HalfLineGrid& xg = pl.x_grid;
  const std::size_t nx = pl.nx();
  const std::size_t nu = pl.nu_nodes();

  // Mass that no output node can see.
  const double total = f.l1();
  if (total > 0.0) {
    const double reach = side == Side::left ? std::exp(p.u) * xg.x_max + p.x
                                            : std::numeric_limits<double>::infinity();
    const double lo = p.u - pl.u_max - 0.5 * pl.u_step;
    const double hi = p.u + pl.u_max + 0.5 * pl.u_step;
    double lost = 0.0;
    for (std::size_t iw = 0; iw < nu; ++iw) {
      const double w = pl.u_nodes[iw];
      const bool row_lost = w < lo || w > hi;
      for (std::size_t iz = 0; iz < nx; ++iz)
        if (row_lost || xg.nodes[iz] > reach)
          lost += pl.u_weights[iw] * xg.weights[iz] * std::abs(f.at(iw, iz));
    }
    if (lost > opt.lost_mass_tol * total)
      throw ResampleError("translation moves " + std::to_string(lost / total) +
                          " of the L1 mass off the grid");
  }

  KernelField out{pl, std::vector<double>(pl.size(), 0.0), f.nu};
  const double dil = std::exp(p.u);
  parallel_for(nu, [&](std::size_t iv) {
    const double v = pl.u_nodes[iv];
    RadialProfile row{xg, row_at(f, p.u + v), DecayClass::gaussian};
    if (row.linf() == 0.0) return;
    for (std::size_t iy = 0; iy < nx; ++iy) {
      const double y = xg.nodes[iy];
      out.at(iv, iy) = side == Side::left
                           ? hankel_translate_at(order, p.x, dil * y, row, opt.hankel)
                           : hankel_translate_at(order, std::exp(v) * p.x, y, row, opt.hankel);
    }
  });
  return out;
}

}  // namespace

KernelField left_translate(const Order& order, const GPoint& p, const KernelField& f,
                           const GTranslateOptions& opt) {
  return translate_field(order, p, f, opt, Side::left);
}

KernelField right_translate(const Order& order, const GPoint& p, const KernelField& f,
                            const GTranslateOptions& opt) {
  return translate_field(order, p, f, opt, Side::right);
}

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// 1 on [0, a], 0 beyond b, C^∞ in between.
double taper(double s, double a, double b) {
  if (s <= a) return 1.0;
  if (s >= b) return 0.0;
  const double y = (s - a) / (b - a);
  const double p = std::exp(-1.0 / (1.0 - y));
  const double q = std::exp(-1.0 / y);
  return p / (p + q);
}

KernelField convolve_spectral(const Order& order, const KernelField& f, const KernelField& g,
                              const GConvolveOptions& opt) {
  const PlaneGrid& pl = f.plane;
  const HalfLineGrid& xg = pl.x_grid;
  const long nx = static_cast<long>(pl.nx());
  const long nu = static_cast<long>(pl.nu_nodes());
  const long c = static_cast<long>(pl.u_center());
  if (!(opt.zeta_lo > 0.0) || !(opt.zeta_hi > opt.zeta_lo))
    throw DomainError("spectral range must satisfy 0 < zeta_lo < zeta_hi");
  if (opt.zeta_refine < 1) throw DomainError("zeta_refine must be >= 1");
  const long m = opt.zeta_refine;
  const double h = pl.u_step / static_cast<double>(m);
  const long nz = static_cast<long>(std::floor(std::log(opt.zeta_hi / opt.zeta_lo) / h)) + 1;

  std::vector<double> zeta(nz);
  for (long k = 0; k < nz; ++k) zeta[k] = opt.zeta_lo * std::exp(h * static_cast<double>(k));

  // Gauss panels of order p integrate j^ν(ζx) well while the phase per panel stays below ~p/2.
  std::vector<double> pw(nx);
  for (long i = 0; i < nx; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) / static_cast<std::size_t>(xg.panel_order);
    pw[i] = xg.breaks[k + 1] - xg.breaks[k];
  }
  const double pa = 0.5 * xg.panel_order;
  const double pb = 0.9 * xg.panel_order;
  // The log-ζ trapezoid is accurate while xζh stays small.
  constexpr double ia = 0.3;
  constexpr double ib = 0.6;

  const double nuo = order.nu;
  std::vector<double> wz(nz);
  for (long k = 0; k < nz; ++k)
    wz[k] = std::pow(zeta[k], nuo) * h * ((k == 0 || k == nz - 1) ? 0.5 : 1.0);
  wz[0] += std::pow(opt.zeta_lo, nuo) / nuo;

  RowMat fwd(nz, nx);
  RowMat inv(nx, nz);
  parallel_for(static_cast<std::size_t>(nz), [&](std::size_t k_) {
    const long k = static_cast<long>(k_);
    for (long i = 0; i < nx; ++i) {
      const double z = zeta[k] * xg.nodes[i];
      const double wf = taper(zeta[k] * pw[i], pa, pb);
      const double wi = taper(z * h, ia, ib);
      const double j = (wf > 0.0 || wi > 0.0) ? j_kernel(order, z) : 0.0;
      fwd(k, i) = wf * xg.weights[i] * j;
      inv(i, k) = wi * wz[k] * j;
    }
  });

  Eigen::Map<const RowMat> fm(f.values.data(), nu, nx);
  Eigen::Map<const RowMat> gm(g.values.data(), nu, nx);
  const RowMat fw = fwd * fm.transpose();  // nz × nu
  const RowMat gw = fwd * gm.transpose();

  // Ĉ_u(ζ) = Σ_v w_v F̂_{u−v}(ζ) Ĝ_v(e^{u−v}ζ); the dilation is a shift by m(u−v)/h_u indices.
  RowMat ch = RowMat::Zero(nz, nu);
  parallel_for(static_cast<std::size_t>(nu), [&](std::size_t iu_) {
    const long iu = static_cast<long>(iu_);
    for (long iv = 0; iv < nu; ++iv) {
      const long s = iu - iv;
      const long fr = s + c;
      if (fr < 0 || fr >= nu) continue;
      const double wv = pl.u_weights[iv];
      for (long k = 0; k < nz; ++k) {
        const long kg = k + m * s;
        if (kg >= nz) break;
        ch(k, iu) += wv * fw(k, fr) * gw(std::max(kg, 0L), iv);
      }
    }
  });

  // Peel off Ĉ_u(0) e^{−a_u ζ²}, matched at half height, and invert it exactly;
  // the windowed quadrature then only sees a remainder vanishing at ζ = 0.
  std::vector<double> mass(nu, 0.0);
  std::vector<double> a(nu, 0.0);
  for (long iu = 0; iu < nu; ++iu) {
    const double c0 = ch(0, iu);
    if (!(c0 > 0.0)) continue;
    long k = 1;
    while (k < nz && ch(k, iu) > 0.5 * c0) ++k;
    if (k >= nz) continue;
    mass[iu] = c0;
    a[iu] = -std::log(std::max(ch(k, iu), 1e-300) / c0) / (zeta[k] * zeta[k]);
    for (long q = 0; q < nz; ++q) ch(q, iu) -= c0 * std::exp(-a[iu] * zeta[q] * zeta[q]);
  }

  const RowMat out_t = inv * ch;  // nx × nu
  KernelField out{pl, std::vector<double>(pl.size()), f.nu};
  const double k2 = 1.0 / (order.kappa * order.kappa);
  for (long iu = 0; iu < nu; ++iu)
    for (long ix = 0; ix < nx; ++ix) {
      double v = k2 * out_t(ix, iu);
      if (mass[iu] > 0.0) v += mass[iu] * bessel_heat_value(order, a[iu], xg.nodes[ix]);
      out.at(static_cast<std::size_t>(iu), static_cast<std::size_t>(ix)) = v;
    }
  return out;
}

KernelField convolve_direct(const Order& order, const KernelField& f, const KernelField& g,
                            const GConvolveOptions& opt) {
  const PlaneGrid& pl = f.plane;
  const HalfLineGrid& xg = pl.x_grid;
  const long nx = static_cast<long>(pl.nx());
  const long nu = static_cast<long>(pl.nu_nodes());
  const long c = static_cast<long>(pl.u_center());

  std::vector<RadialProfile> rows;
  rows.reserve(static_cast<std::size_t>(nu));
  for (long iu = 0; iu < nu; ++iu)
    rows.push_back(RadialProfile{xg, f.row(static_cast<std::size_t>(iu)), DecayClass::gaussian});

  KernelField out{pl, std::vector<double>(pl.size(), 0.0), f.nu};
  parallel_for(pl.size(), [&](std::size_t idx) {
    const long iu = static_cast<long>(idx / pl.nx());
    const long ix = static_cast<long>(idx % pl.nx());
    const double x = xg.nodes[ix];
    double acc = 0.0;
    for (long iv = 0; iv < nu; ++iv) {
      const long fr = iu - iv + c;
      if (fr < 0 || fr >= nu) continue;
      const RadialProfile& row = rows[fr];
      if (row.linf() == 0.0) continue;
      const double dil = std::exp(pl.u_nodes[iu] - pl.u_nodes[iv]);
      double inner = 0.0;
      for (long iy = 0; iy < nx; ++iy) {
        const double gv = g.at(static_cast<std::size_t>(iv), static_cast<std::size_t>(iy));
        if (gv == 0.0) continue;
        inner += xg.weights[iy] * gv *
                 hankel_translate_at(order, x, dil * xg.nodes[iy], row, opt.hankel);
      }
      acc += pl.u_weights[iv] * inner;
    }
    out.values[idx] = acc;
  });
  return out;
}

}  // namespace

KernelField g_convolve(const Order& order, const KernelField& f, const KernelField& g,
                       const GConvolveOptions& opt) {
  f.validate();
  g.validate();
  check_same_plane(f, g);
  return opt.method == ConvolveMethod::spectral ? convolve_spectral(order, f, g, opt)
                                                : convolve_direct(order, f, g, opt);
}

double radial_integrate(const Order& order, const std::function<double(double)>& f,
                        double r_max, const std::vector<double>& breakpoints,
                        const QuadratureSpec& spec) {
  if (!(r_max > 0.0)) throw DomainError("radial range must be positive");
  std::vector<double> cuts{0.0};
  for (double b : breakpoints)
    if (b > 0.0 && b < r_max) cuts.push_back(b);
  cuts.push_back(r_max);
  std::sort(cuts.begin(), cuts.end());
  const auto g = [&](double r) { return f(r) * std::pow(std::sinh(r), order.nu); };
  double s = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k)
    if (cuts[k] > cuts[k - 1]) s += integrate_interval(g, cuts[k - 1], cuts[k], spec).value;
  return order.c * s;
}

namespace {

template <class W>
double plane_sum(const PlaneGrid& plane, W&& weight) {
  double s = 0.0;
  for (std::size_t iu = 0; iu < plane.nu_nodes(); ++iu) {
    double row = 0.0;
    for (std::size_t ix = 0; ix < plane.nx(); ++ix)
      row += plane.x_grid.weights[ix] * weight(plane.x_grid.nodes[ix], plane.u_nodes[iu]);
    s += plane.u_weights[iu] * row;
  }
  return s;
}

}  // namespace

double radial_integrate_plane(const Order& order, const std::function<double(double)>& f,
                              const PlaneGrid& plane, bool left_haar) {
  return plane_sum(plane, [&](double x, double u) {
    const double v = f(gnorm({x, u}));
    return left_haar ? v * std::exp(-order.nu * u) : v;
  });
}

KernelField ball_indicator(const Order& order, double r, const PlaneGrid& plane) {
  return sample_field(plane, order.nu,
                      [&](double x, double u) { return gnorm({x, u}) <= r ? 1.0 : 0.0; });
}

BallBound weighted_ball_bound(const Order& order, const std::function<double(double)>& f,
                              const PlaneGrid& plane) {
  BallBound b;
  b.lhs = plane_sum(plane, [&](double x, double u) {
    return f(gnorm({x, u})) * std::exp(-order.nu * u) * std::pow(x, order.nu);
  });
  b.rhs = plane_sum(plane, [&](double x, double u) {
    const double r = gnorm({x, u});
    return f(r) * r;
  });
  b.ratio = b.rhs > 0.0 ? b.lhs / b.rhs : 0.0;
  return b;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_num(const std::string& s, const std::string& what) {
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

void write_field(std::ostream& os, const KernelField& f) {
  const HalfLineGrid& xg = f.plane.x_grid;
  os << "# kingman field\n";
  os << "# nu=" << fmt17(f.nu) << "\n";
  os << "# x_max=" << fmt17(xg.x_max) << "\n";
  os << "# layout=" << to_string(xg.layout) << "\n";
  os << "# panel_order=" << xg.panel_order << "\n";
  os << "# breaks=";
  for (std::size_t k = 0; k < xg.breaks.size(); ++k) os << (k ? "," : "") << fmt17(xg.breaks[k]);
  os << "\n# u_max=" << fmt17(f.plane.u_max) << "\n";
  os << "# n_u=" << f.plane.nu_nodes() << "\n";
  os << "x,u,value\n";
  for (std::size_t iu = 0; iu < f.plane.nu_nodes(); ++iu)
    for (std::size_t ix = 0; ix < f.plane.nx(); ++ix)
      os << fmt17(xg.nodes[ix]) << "," << fmt17(f.plane.u_nodes[iu]) << "," << fmt17(f.at(iu, ix))
         << "\n";
}

KernelField read_field(std::istream& is) {
  std::map<std::string, std::string> header;
  std::vector<double> vals;
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
    if (line == "x,u,value") continue;
    const auto c2 = line.rfind(',');
    if (c2 == std::string::npos) throw ParseError("field row lacks commas: '" + line + "'");
    vals.push_back(parse_num(line.substr(c2 + 1), "value"));
  }
  for (const char* key : {"nu", "breaks", "panel_order", "u_max", "n_u"})
    if (!header.count(key)) throw ParseError(std::string("field header lacks ") + key);
  const double nu = parse_num(header["nu"], "nu");
  std::vector<double> breaks;
  std::stringstream ss(header["breaks"]);
  std::string item;
  while (std::getline(ss, item, ',')) breaks.push_back(parse_num(item, "breaks"));
  const GridLayout layout =
      header.count("layout") ? parse_layout(header["layout"]) : GridLayout::composite;
  HalfLineGrid xg = grid_from_breaks(nu, std::move(breaks),
                                     static_cast<int>(parse_num(header["panel_order"], "panel_order")),
                                     layout);
  PlaneGrid plane = build_plane(std::move(xg), parse_num(header["u_max"], "u_max"),
                                static_cast<int>(parse_num(header["n_u"], "n_u")));
  if (vals.size() != plane.size()) throw ParseError("field rows do not match the declared plane");
  KernelField f{std::move(plane), std::move(vals), nu};
  f.validate();
  return f;
}

void save_field(const std::string& path, const KernelField& f) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  write_field(os, f);
}

KernelField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path + "'");
  return read_field(is);
}

}  // namespace kingman
