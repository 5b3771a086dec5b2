#include "seirim/rng.hpp"

#include <cmath>

namespace seirim {

double Rng::log_uniform(double lo, double hi)
{
    return lo * std::exp(uniform01() * std::log(hi / lo));
}

} // namespace seirim
