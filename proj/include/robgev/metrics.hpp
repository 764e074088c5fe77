#pragma once

#include "robgev/gev.hpp"

namespace robgev {

enum class W1Method { QuantileIntegral, CdfIntegral };

struct W1Request {
  GevParams first;
  GevParams second;
  W1Method method = W1Method::QuantileIntegral;
  double tolerance = 1e-10;
};

/// Wasserstein-1 distance between two GEV laws, either as the integral of
/// |Q1 - Q2| over (0, 1) or of |F1 - F2| over the real line. Both shapes must
/// be below 1; otherwise Error(InfiniteMoment) is thrown.
double wasserstein1(const W1Request& request);

inline double wasserstein1(const GevParams& first, const GevParams& second) {
  return wasserstein1(W1Request{first, second});
}

}  // namespace robgev
