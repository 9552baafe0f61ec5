#include "dxnn/cartpole.hpp"

#include <cmath>

#include "dxnn/errors.hpp"

namespace dxnn {

namespace {

double sgn(double v)
{
    return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
}

CartPoleState axpy(const CartPoleState& s, double h, const CartPoleState& d)
{
    return CartPoleState{s.x + h * d.x,           s.x_dot + h * d.x_dot,
                         s.theta1 + h * d.theta1, s.theta1_dot + h * d.theta1_dot,
                         s.theta2 + h * d.theta2, s.theta2_dot + h * d.theta2_dot};
}

bool finite(const CartPoleState& s)
{
    return std::isfinite(s.x) && std::isfinite(s.x_dot) && std::isfinite(s.theta1) && std::isfinite(s.theta1_dot) &&
           std::isfinite(s.theta2) && std::isfinite(s.theta2_dot);
}

} // namespace

CartPoleState derivatives(const CartPoleState& s, double force, const CartPoleConstants& c)
{
    const double theta[2] = {s.theta1, s.theta2};
    const double theta_dot[2] = {s.theta1_dot, s.theta2_dot};
    double f_sum = 0.0;
    double m_sum = 0.0;
    double cos_t[2];
    double g_sin[2];
    double damp[2];
    for (int i = 0; i < 2; ++i) {
        const double m = c.pole_mass[i];
        const double l = c.half_length[i];
        cos_t[i] = std::cos(theta[i]);
        g_sin[i] = c.gravity * std::sin(theta[i]);
        damp[i] = c.pole_friction * theta_dot[i] / (m * l);
        f_sum += m * l * theta_dot[i] * theta_dot[i] * std::sin(theta[i]) + 0.75 * m * cos_t[i] * (damp[i] + g_sin[i]);
        m_sum += m * (1.0 - 0.75 * cos_t[i] * cos_t[i]);
    }
    const double x_acc = (force - c.cart_friction * sgn(s.x_dot) + f_sum) / (c.cart_mass + m_sum);
    CartPoleState d;
    d.x = s.x_dot;
    d.x_dot = x_acc;
    d.theta1 = s.theta1_dot;
    d.theta1_dot = -0.75 * (x_acc * cos_t[0] + g_sin[0] + damp[0]) / c.half_length[0];
    d.theta2 = s.theta2_dot;
    d.theta2_dot = -0.75 * (x_acc * cos_t[1] + g_sin[1] + damp[1]) / c.half_length[1];
    return d;
}

CartPoleState rk4_step(const CartPoleState& s, double force, double dt, const CartPoleConstants& c)
{
    const CartPoleState k1 = derivatives(s, force, c);
    const CartPoleState k2 = derivatives(axpy(s, dt / 2.0, k1), force, c);
    const CartPoleState k3 = derivatives(axpy(s, dt / 2.0, k2), force, c);
    const CartPoleState k4 = derivatives(axpy(s, dt, k3), force, c);
    const double h6 = dt / 6.0;
    CartPoleState next{s.x + h6 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                       s.x_dot + h6 * (k1.x_dot + 2.0 * k2.x_dot + 2.0 * k3.x_dot + k4.x_dot),
                       s.theta1 + h6 * (k1.theta1 + 2.0 * k2.theta1 + 2.0 * k3.theta1 + k4.theta1),
                       s.theta1_dot + h6 * (k1.theta1_dot + 2.0 * k2.theta1_dot + 2.0 * k3.theta1_dot + k4.theta1_dot),
                       s.theta2 + h6 * (k1.theta2 + 2.0 * k2.theta2 + 2.0 * k3.theta2 + k4.theta2),
                       s.theta2_dot + h6 * (k1.theta2_dot + 2.0 * k2.theta2_dot + 2.0 * k3.theta2_dot + k4.theta2_dot)};
    if (!finite(next))
        throw PhysicsError("cart-pole state became non-finite");
    return next;
}

double mechanical_energy(const CartPoleState& s, const CartPoleConstants& c)
{
    const double theta[2] = {s.theta1, s.theta2};
    const double theta_dot[2] = {s.theta1_dot, s.theta2_dot};
    double total_mass = c.cart_mass;
    double e = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double m = c.pole_mass[i];
        const double l = c.half_length[i];
        total_mass += m;
        e += m * l * std::cos(theta[i]) * s.x_dot * theta_dot[i];
        e += (2.0 / 3.0) * m * l * l * theta_dot[i] * theta_dot[i];
        e += m * (-c.gravity) * l * std::cos(theta[i]);
    }
    return e + 0.5 * total_mass * s.x_dot * s.x_dot;
}

bool out_of_bounds(const CartPoleState& s)
{
    return std::fabs(s.x) > kTrackLimit || std::fabs(s.theta1) > kAngleLimit || std::fabs(s.theta2) > kAngleLimit;
}

} // namespace dxnn
