#include "hdm/reference/tables.hpp"

namespace hdm::reference {

const RefTable gr_ns = {
    "gr_ns",
    6,
    1,
    {0.353553, 0.176777, 0.088388, 0.044194, 0.022097, 0.011049},
    {9, 49, 225, 961, 3969, 16129},
    {{{1.050933, 0.214195, 0.067498, 0.019240, 0.005156, 0.001336},
      {0.567673, 0.167145, 0.049952, 0.013806, 0.003646, 0.000939},
      {0.582651, 0.267188, 0.128511, 0.062184, 0.030460, 0.015060}},
     {{0}}},
    {{{2.2947, 1.6660, 1.8107, 1.8999, 1.9482},
      {1.7640, 1.7425, 1.8552, 1.9209, 1.9575},
      {1.1248, 1.0560, 1.0473, 1.0296, 1.0162}},
     {{0}}},
    {1., 1., 1.},
    false,
};

}  // namespace hdm::reference
