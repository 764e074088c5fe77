#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace robgev {

/// Below this |xi| the Gumbel (xi = 0) closed forms are used for the
/// density, cdf and quantile.
inline constexpr double kGumbelSwitch = 1e-8;

struct Support {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double x) const noexcept { return x > lower && x < upper; }
};

/// Location, scale and shape of a generalized extreme-value law.
class GevParams {
 public:
  /// Throws Error(InvalidArgument) unless sigma > 0 and all values finite.
  GevParams(double mu, double sigma, double xi);
  GevParams() : GevParams(0.0, 1.0, 0.0) {}

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double xi() const noexcept { return xi_; }

  /// Closed support. Points equal to a finite endpoint are treated as
  /// outside of it by every density-based routine (see Support::contains).
  Support support() const noexcept;

  friend bool operator==(const GevParams&, const GevParams&) = default;

 private:
  double mu_;
  double sigma_;
  double xi_;
};

double pdf(double x, const GevParams& p) noexcept;

/// log f(x); -inf outside the open support.
double log_pdf(double x, const GevParams& p) noexcept;

double cdf(double x, const GevParams& p) noexcept;

/// Inverse cdf. Throws Error(InvalidArgument) unless 0 < prob < 1.
double quantile(double prob, const GevParams& p);

/// n draws by inversion from a std::mt19937_64 seeded with `seed`.
/// Bit-for-bit reproducible across platforms.
std::vector<double> sample(std::size_t n, const GevParams& p, std::uint64_t seed);

/// Standardized quantile z(h) = ((e^{xi h}) - 1) / xi as a function of the
/// Gumbel-scale variate h = -log(-log u). Exact at xi = 0 (returns h).
double standard_quantile_from_gumbel(double h, double xi) noexcept;

/// Open-interval uniform variate in (0, 1) built from the top 53 bits.
inline double to_unit_open(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace robgev
