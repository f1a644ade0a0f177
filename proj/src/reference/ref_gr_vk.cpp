#include "hdm/reference/tables.hpp"

namespace hdm::reference {

const RefTable gr_vk = {
    "gr_vk",
    6,
    2,
    {0.353553, 0.176777, 0.088388, 0.044194, 0.022097, 0.011049},
    {9, 49, 225, 961, 3969, 16129},
    {{{1.049207, 0.214594, 0.067946, 0.019702, 0.005632, 0.001844},
      {0.567835, 0.167636, 0.050446, 0.014295, 0.004146, 0.001483},
      {0.582623, 0.267284, 0.128565, 0.062217, 0.030483, 0.015082}},
     {{1.051793, 0.213996, 0.067275, 0.019011, 0.004929, 0.001124},
      {0.567587, 0.166900, 0.049707, 0.013567, 0.003417, 0.000742},
      {0.582660, 0.267141, 0.128485, 0.062171, 0.030454, 0.015059}}},
    {{{2.2896, 1.6591, 1.7860, 1.8068, 1.6109},
      {1.7601, 1.7325, 1.8192, 1.7858, 1.4828},
      {1.1242, 1.0559, 1.0471, 1.0293, 1.0152}},
     {{2.2972, 1.6694, 1.8232, 1.9474, 2.1325},
      {1.7659, 1.7475, 1.8733, 1.9894, 2.2036},
      {1.1251, 1.0560, 1.0473, 1.0296, 1.0160}}},
    {1., 1., 1.},
    false,
};

}  // namespace hdm::reference
