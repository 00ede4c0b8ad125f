#include "rsreg/rng.hpp"

#include <cmath>

namespace rsreg {

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

double Rng::student_t(double dof) {
    // Bailey (1994), polar rejection.
    double u, v, w;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        w = u * u + v * v;
    } while (w > 1.0 || w == 0.0);
    return u * std::sqrt(dof * (std::pow(w, -2.0 / dof) - 1.0) / w);
}

double Rng::pareto_symmetric(double alpha, double scale) {
    const double mag = scale * std::pow(uniform_pos(), -1.0 / alpha);
    return uniform() < 0.5 ? -mag : mag;
}

}  // namespace rsreg
