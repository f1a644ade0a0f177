#ifndef HDM_QUADRATURE_HPP
#define HDM_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "hdm/mesh.hpp"

namespace hdm {

/// Quadrature rule on the reference cell: the triangle (0,0),(1,0),(0,1)
/// (measure 1/2) or the square [0,1]^2 (measure 1). All weights are positive.
struct QuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Rule integrating bivariate polynomials of total degree <= degree exactly.
/// Triangles use embedded symmetric rules up to degree 14 (a request between
/// stored degrees rounds up to the next stored rule); rectangles use tensor
/// Gauss-Legendre up to degree 17.
const QuadRule& rule_for(CellKind kind, int degree);

/// Physical points and weights of the rule mapped onto one cell; weights
/// include the Jacobian and sum to the cell area.
void map_rule_to_cell(const Mesh& m, int cell, const QuadRule& rule,
                      std::vector<Vec2>& pts, std::vector<double>& wts);

double integrate_on_cell(const Mesh& m, int cell,
                         const std::function<double(const Vec2&)>& f,
                         int degree);

double integrate(const Mesh& m, const std::function<double(const Vec2&)>& f,
                 int degree);

}  // namespace hdm

#endif
