#include "cqtf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cqtf/errors.hpp"
#include "cqtf/thomas_fermi.hpp"

namespace cqtf {

RadialGrid::RadialGrid(int d, std::size_t n, double r_max)
    : d_(d), n_(n), r_max_(r_max), h_(0.0), omega_(0.0) {
  if (d < 1 || d > 3) throw DomainError("grid: dimension must be 1, 2 or 3");
  if (n < kMinNodes) throw DomainError("grid: need at least 64 nodes");
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw DomainError("grid: r_max must be positive");
  h_ = r_max / static_cast<double>(n - 1);
  omega_ = omega_d(d);

  weights_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    weights_[j] = omega_ * std::pow(node(j), d - 1) * h_ * c;
  }

  edges_.resize(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    switch (d) {
      case 1: edges_[j] = 1.0; break;
      case 2: edges_[j] = node(j) + 0.5 * h_; break;
      // r_j r_{j+1}; the first edge would vanish and leave u_0 free.
      default: edges_[j] = j == 0 ? 0.25 * h_ * h_ : node(j) * node(j + 1); break;
    }
  }
}

RadialField::RadialField(RadialGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) throw DomainError("field size does not match its grid");
}

RadialField RadialField::sample(const RadialGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(g.node(j));
  return {g, std::move(v)};
}

double integrate(const RadialField& field, double power, double weight_p) {
  const auto& g = field.grid;
  double sum = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double w = g.weight(j);
    if (w == 0.0) continue;
    double term = w * std::pow(std::abs(field.values[j]), power);
    if (weight_p != 0.0) term *= std::pow(g.node(j), weight_p);
    sum += term;
  }
  return sum;
}

double lq_norm(const RadialField& field, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : field.values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(q >= 1.0)) throw DomainError("lq_norm: q must be >= 1");
  return std::pow(integrate(field, q, 0.0), 1.0 / q);
}

double gradient_norm_sq(const RadialField& field) {
  const auto& g = field.grid;
  const auto& u = field.values;
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < g.size(); ++j) {
    const double du = u[j + 1] - u[j];
    sum += g.edge_factor(j) * du * du;
  }
  return g.omega() * sum / g.h();
}

RadialField apply_radial_laplacian(const RadialField& field) {
  const auto& g = field.grid;
  const auto& u = field.values;
  const std::size_t n = g.size();
  const double h = g.h();
  const double h2 = h * h;
  const int d = g.d();

  RadialField out(g);
  auto& lap = out.values;
  lap[0] = 2.0 * d * (u[1] - u[0]) / h2;
  for (std::size_t j = 1; j < n; ++j) {
    const double right = j + 1 < n ? u[j + 1] : 0.0;
    const double r = g.node(j);
    lap[j] = (right - 2.0 * u[j] + u[j - 1]) / h2 + (d - 1) / r * (right - u[j - 1]) / (2.0 * h);
  }
  return out;
}

void write_csv(std::ostream& out, const RadialField& field) {
  out << "r,value\n";
  char buf[64];
  for (std::size_t j = 0; j < field.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", field.r(j), field.values[j]);
    out << buf;
  }
}

RadialField read_csv(std::istream& in, int d) {
  std::string line;
  if (!std::getline(in, line) || line != "r,value") throw DomainError("field CSV: bad header");
  std::vector<double> r, v;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DomainError("field CSV: malformed row");
    r.push_back(std::stod(line.substr(0, comma)));
    v.push_back(std::stod(line.substr(comma + 1)));
  }
  if (r.size() < RadialGrid::kMinNodes) throw DomainError("field CSV: too few rows");
  return {RadialGrid(d, r.size(), r.back()), std::move(v)};
}

}  // namespace cqtf
