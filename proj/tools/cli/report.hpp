#pragma once

#include "json.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace desitter::cli {

using Json = nlohmann::ordered_json;

// Every floating-point result is written with the tolerance it was computed
// or tested at. NaN is written as null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json measured(double value, double tol) { return Json{{"value", number_or_null(value)}, {"tol", tol}}; }

inline Json tested(double value, double tol, bool pass) {
  return Json{{"value", number_or_null(value)}, {"tol", tol}, {"pass", pass}};
}

inline Json sampled(const Eigen::VectorXd& values, double tol) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) arr.push_back(number_or_null(values(i)));
  return Json{{"tol", tol}, {"values", std::move(arr)}};
}

}  // namespace desitter::cli
