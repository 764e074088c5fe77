#include "robgev/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace robgev {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                             const Eigen::VectorXd& start, const Eigen::VectorXd& steps,
                             const NelderMeadOptions& options) {
  const auto dim = start.size();
  NelderMeadResult result;

  auto eval = [&](const Eigen::VectorXd& x) {
    ++result.evaluations;
    const double v = objective(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<Eigen::VectorXd> vertex(dim + 1, start);
  std::vector<double> value(dim + 1);
  for (Eigen::Index i = 0; i < dim; ++i) vertex[i + 1][i] += steps[i];
  for (Eigen::Index i = 0; i <= dim; ++i) value[i] = eval(vertex[i]);

  std::vector<Eigen::Index> order(dim + 1);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return value[a] < value[b]; });
    const auto best = order.front();
    const auto worst = order.back();
    const auto second_worst = order[dim - 1];

    if (std::isfinite(value[worst])) {
      const double spread = value[worst] - value[best];
      double diameter = 0.0;
      for (Eigen::Index i = 0; i <= dim; ++i) {
        diameter = std::max(diameter, (vertex[i] - vertex[best]).lpNorm<Eigen::Infinity>());
      }
      if (spread <= options.f_tolerance * std::max(1.0, std::abs(value[best])) &&
          diameter <= options.x_tolerance) {
        result.converged = true;
        break;
      }
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (Eigen::Index i = 0; i <= dim; ++i) {
      if (i != worst) centroid += vertex[i];
    }
    centroid /= static_cast<double>(dim);

    const Eigen::VectorXd reflected = centroid + kReflect * (centroid - vertex[worst]);
    const double f_reflected = eval(reflected);

    if (f_reflected < value[best]) {
      const Eigen::VectorXd expanded = centroid + kExpand * (reflected - centroid);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[worst] = expanded;
        value[worst] = f_expanded;
      } else {
        vertex[worst] = reflected;
        value[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[second_worst]) {
      vertex[worst] = reflected;
      value[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < value[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + kContract * (reflected - centroid))
                : Eigen::VectorXd(centroid + kContract * (vertex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : value[worst])) {
      vertex[worst] = contracted;
      value[worst] = f_contracted;
      continue;
    }

    for (Eigen::Index i = 0; i <= dim; ++i) {
      if (i == best) continue;
      vertex[i] = vertex[best] + kShrink * (vertex[i] - vertex[best]);
      value[i] = eval(vertex[i]);
    }
  }

  const auto best = std::min_element(value.begin(), value.end()) - value.begin();
  result.x = vertex[best];
  result.value = value[best];
  return result;
}

}  // namespace robgev
