#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace cqtf {

/// Uniform radial grid r_j = j h, j = 0..n-1, h = r_max / (n - 1), carrying
/// the measure omega_d r^{d-1} dr.
class RadialGrid {
public:
  static constexpr std::size_t kMinNodes = 64;

  RadialGrid(int d, std::size_t n, double r_max);

  int d() const { return d_; }
  std::size_t size() const { return n_; }
  double r_max() const { return r_max_; }
  double h() const { return h_; }
  double omega() const { return omega_; }
  double node(std::size_t j) const { return static_cast<double>(j) * h_; }

  /// Trapezoid weight omega_d r_j^{d-1} h c_j with c_0 = c_{n-1} = 1/2.
  double weight(std::size_t j) const { return weights_[j]; }
  std::span<const double> weights() const { return weights_; }

  /// Radial factor on the edge (j, j+1) in the discrete Dirichlet form
  /// omega_d sum_j e_j (u_{j+1} - u_j)^2 / h. Chosen so that the variational
  /// Laplacian coincides with the central-difference one at interior nodes.
  double edge_factor(std::size_t j) const { return edges_[j]; }

  bool operator==(const RadialGrid& other) const {
    return d_ == other.d_ && n_ == other.n_ && r_max_ == other.r_max_;
  }

private:
  int d_;
  std::size_t n_;
  double r_max_;
  double h_;
  double omega_;
  std::vector<double> weights_;
  std::vector<double> edges_;
};

struct RadialField {
  RadialGrid grid;
  std::vector<double> values;

  RadialField(RadialGrid g, std::vector<double> v);
  explicit RadialField(RadialGrid g) : RadialField(g, std::vector<double>(g.size(), 0.0)) {}

  /// Samples f at every node.
  static RadialField sample(const RadialGrid& g, const std::function<double(double)>& f);

  std::size_t size() const { return values.size(); }
  double r(std::size_t j) const { return grid.node(j); }
};

/// omega_d int_0^{r_max} |u|^power r^{weight_p + d - 1} dr by the trapezoid rule.
double integrate(const RadialField& field, double power, double weight_p = 0.0);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// L^q norm; q = kInfinity gives max |u_j|.
double lq_norm(const RadialField& field, double q);

/// int |grad u|^2 from midpoint differences (u_{j+1} - u_j) / h.
double gradient_norm_sq(const RadialField& field);

/// u'' + (d-1)/r u' by central differences; d u''(0) at the origin through
/// the even extension u_{-1} = u_1; ghost value 0 beyond r_max.
RadialField apply_radial_laplacian(const RadialField& field);

/// CSV with header "r,value", 17 significant digits.
void write_csv(std::ostream& out, const RadialField& field);
RadialField read_csv(std::istream& in, int d);

}  // namespace cqtf
