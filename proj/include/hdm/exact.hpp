#ifndef HDM_EXACT_HPP
#define HDM_EXACT_HPP

#include <functional>
#include <vector>

#include "hdm/mesh.hpp"

namespace hdm {

/// One scalar component of an exact solution: value, gradient and Hessian
/// callables on the computational domain.
struct ExactComponent {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> grad;
  std::function<Mat2(const Vec2&)> hess;
};

/// k-component exact solution (k = 1 stream function, k = 2 plate pair).
using ExactBundle = std::vector<ExactComponent>;

}  // namespace hdm

#endif
