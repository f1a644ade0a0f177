#include "hdm/reference/tables.hpp"

namespace hdm::reference {

// Orders only: the singular benchmark's raw error values depend on details
// of the corner quadrature, and its mesh family is pinned by h, not by the
// unknown counts.
const RefTable morley_vk_lshape = {
    "morley_vk_lshape",
    6,
    2,
    {0.707107, 0.353553, 0.176777, 0.088388, 0.044194, 0.022097},
    {33, 161, 705, 2945, 12033, 48641},
    {{{2.826994, 0.874885, 0.250204, 0.071856, 0.022050, 0.007491},
      {1.985957, 0.623930, 0.181811, 0.053249, 0.017351, 0.006560},
      {1.758240, 0.984743, 0.524270, 0.273319, 0.143736, 0.077744}},
     {{1.910146, 0.794724, 0.229244, 0.064624, 0.019339, 0.006411},
      {1.293881, 0.569137, 0.167686, 0.047896, 0.015209, 0.005694},
      {1.351562, 0.966468, 0.527682, 0.275565, 0.144849, 0.078259}}},
    {{{1.6921, 1.8060, 1.7999, 1.7044, 1.5575},
      {1.6704, 1.7789, 1.7716, 1.6178, 1.4033},
      {0.8363, 0.9094, 0.9397, 0.9272, 0.8866}},
     {{1.2652, 1.7936, 1.8267, 1.7406, 1.5929},
      {1.1849, 1.7630, 1.8078, 1.6550, 1.4175},
      {0.4838, 0.8731, 0.9373, 0.9278, 0.8882}}},
    {1., 1., 1.},
    false,
};

}  // namespace hdm::reference
