#include "levicool/physpar.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace levicool {

double mass_from_diameter(double diameter, double density) {
    if (diameter <= 0 || density <= 0)
        throw std::invalid_argument("mass_from_diameter: diameter and density must be > 0");
    return density * (std::numbers::pi / 6.0) * diameter * diameter * diameter;
}

double zero_point_fluctuation(double mass, double omega, const PhysicalConstants& pc) {
    if (mass <= 0 || omega <= 0)
        throw std::invalid_argument("zero_point_fluctuation: mass and omega must be > 0");
    return std::sqrt(pc.hbar / (2.0 * mass * omega));
}

double thermal_de_broglie(double m_gas, double temperature, const PhysicalConstants& pc) {
    if (m_gas <= 0 || temperature <= 0)
        throw std::invalid_argument("thermal_de_broglie: m_gas and T must be > 0");
    return pc.h / std::sqrt(two_pi * m_gas * pc.k_B * temperature);
}

ModeTemperature occupation_temperature(double n, double omega, const PhysicalConstants& pc) {
    if (n < 0)
        throw std::invalid_argument("occupation_temperature: n must be >= 0");
    if (omega <= 0)
        throw std::invalid_argument("occupation_temperature: omega must be > 0");
    if (n == 0) return {0.0, 1.0};
    // log1p keeps the inversion accurate for n >> 1.
    double T = pc.hbar * omega / (pc.k_B * std::log1p(1.0 / n));
    return {T, 1.0 / (1.0 + n)};
}

double temperature_occupation(double T_mode, double omega, const PhysicalConstants& pc) {
    if (T_mode < 0)
        throw std::invalid_argument("temperature_occupation: T must be >= 0");
    if (omega <= 0)
        throw std::invalid_argument("temperature_occupation: omega must be > 0");
    if (T_mode == 0) return 0.0;
    return 1.0 / std::expm1(pc.hbar * omega / (pc.k_B * T_mode));
}

} // namespace levicool
