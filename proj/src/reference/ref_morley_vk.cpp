#include "hdm/reference/tables.hpp"

namespace hdm::reference {

const RefTable morley_vk = {
    "morley_vk",
    6,
    2,
    {1.00000, 0.50000, 0.25000, 0.12500, 0.06250, 0.03125},
    {5, 25, 113, 481, 1985, 8065},
    {{{8.560933, 2.204201, 0.581424, 0.154705, 0.039490, 0.009929},
      {3.564432, 1.145871, 0.331537, 0.092576, 0.024008, 0.006062},
      {2.585671, 1.461266, 0.750127, 0.389103, 0.197022, 0.098852}},
     {{8.564924, 2.204151, 0.581494, 0.154705, 0.039488, 0.009928},
      {3.566189, 1.145773, 0.331586, 0.092575, 0.024007, 0.006062},
      {2.586783, 1.461500, 0.750404, 0.389239, 0.197091, 0.098886}}},
    {{{1.9575, 1.9226, 1.9101, 1.9700, 1.9918},
      {1.6372, 1.7892, 1.8405, 1.9471, 1.9855},
      {0.8233, 0.9620, 0.9470, 0.9818, 0.9950}},
     {{1.9582, 1.9224, 1.9102, 1.9700, 1.9918},
      {1.6381, 1.7889, 1.8407, 1.9472, 1.9855},
      {0.8237, 0.9617, 0.9470, 0.9818, 0.9950}}},
    {1., 1., 1.},
    true,
};

}  // namespace hdm::reference
