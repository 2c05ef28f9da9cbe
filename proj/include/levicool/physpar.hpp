#ifndef LEVICOOL_PHYSPAR_HPP
#define LEVICOOL_PHYSPAR_HPP

#include "levicool/constants.hpp"

namespace levicool {

// m = rho * (pi/6) * d^3
double mass_from_diameter(double diameter, double density);

// x_zpf = sqrt(hbar / (2 m Omega))
double zero_point_fluctuation(double mass, double omega,
                              const PhysicalConstants& pc = {});

// lambda_th = h / sqrt(2 pi m_gas k_B T)
double thermal_de_broglie(double m_gas, double temperature,
                          const PhysicalConstants& pc = {});

struct ModeTemperature {
    double T_mode;      // K
    double ground_prob; // P(n=0) = 1/(1+n)
};

// Inverts the Bose occupation: T = hbar*Omega / (k_B ln(1 + 1/n)).
// n = 0 maps to (0 K, 1).
ModeTemperature occupation_temperature(double n, double omega,
                                       const PhysicalConstants& pc = {});

// Bose occupation n(T) = 1/(exp(hbar*Omega/k_B T) - 1); T = 0 maps to 0.
double temperature_occupation(double T_mode, double omega,
                              const PhysicalConstants& pc = {});

} // namespace levicool

#endif
