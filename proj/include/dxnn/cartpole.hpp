#pragma once

// Two poles hinged on a cart, after the Wieland parameterization.
//
//   F~_i = m_i l_i th_i'^2 sin th_i + 3/4 m_i cos th_i (mu_p th_i' / (m_i l_i) + g sin th_i)
//   m~_i = m_i (1 - 3/4 cos^2 th_i)
//   x''  = (F - mu_c sgn(x') + sum F~_i) / (M + sum m~_i)
//   th_i'' = -3/(4 l_i) (x'' cos th_i + g sin th_i + mu_p th_i' / (m_i l_i))
//
// l_i are half-lengths and g is negative (-9.8). Angles are measured from the
// upright position.

#include <array>

namespace dxnn {

struct CartPoleConstants {
    double gravity = -9.8;
    double cart_mass = 1.0;
    std::array<double, 2> pole_mass{0.1, 0.01};
    std::array<double, 2> half_length{0.5, 0.05};
    double cart_friction = 5e-4;
    double pole_friction = 2e-6;
};

struct CartPoleState {
    double x = 0.0;
    double x_dot = 0.0;
    double theta1 = 0.0;
    double theta1_dot = 0.0;
    double theta2 = 0.0;
    double theta2_dot = 0.0;

    friend bool operator==(const CartPoleState&, const CartPoleState&) = default;
};

inline constexpr double kTrackLimit = 2.4;
inline constexpr double kAngleLimit = 36.0 * 3.14159265358979323846 / 180.0;

// Time derivative of the state under `force`.
CartPoleState derivatives(const CartPoleState& s, double force, const CartPoleConstants& c);

// One classic fourth-order Runge-Kutta step. Throws PhysicsError if the
// result is not finite.
CartPoleState rk4_step(const CartPoleState& s, double force, double dt, const CartPoleConstants& c);

// Kinetic plus potential energy; conserved when both friction terms and the
// force are zero.
double mechanical_energy(const CartPoleState& s, const CartPoleConstants& c);

// Strict inequalities: sitting exactly on a limit is still inside.
bool out_of_bounds(const CartPoleState& s);

} // namespace dxnn
