#include "hdm/reference/tables.hpp"

#include <cmath>

namespace hdm::reference {

// This baseline stores the error times the exact norm; scale holds the L2
// norms of the manufactured bump x^2(1-x)^2 y^2(1-y)^2, its gradient and its
// Hessian on the unit square.
const RefTable morley_ns = {
    "morley_ns",
    6,
    1,
    {1.00000, 0.50000, 0.25000, 0.12500, 0.06250, 0.03125},
    {5, 25, 113, 481, 1985, 8065},
    {{{0.0135922, 0.003499, 0.000923, 0.000246, 0.000063, 0.000016},
      {0.027680, 0.008910, 0.002578, 0.000720, 0.000187, 0.000047},
      {0.147997, 0.083508, 0.042875, 0.022240, 0.011261, 0.005650}},
     {{0}}},
    {{{1.9579, 1.9225, 1.9102, 1.9700, 1.9918},
      {1.6353, 1.7890, 1.8406, 1.9472, 1.9855},
      {0.8256, 0.9618, 0.9470, 0.9818, 0.9950}},
     {{0}}},
    {1. / 630., std::sqrt(6.) / 315., 2. / 35.},
    true,
};

}  // namespace hdm::reference
