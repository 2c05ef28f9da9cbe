#ifndef LEVICOOL_CONSTANTS_HPP
#define LEVICOOL_CONSTANTS_HPP

#include <numbers>

namespace levicool {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 values, SI units.
struct PhysicalConstants {
    double hbar = 1.054571817e-34; // J s
    double h    = 6.62607015e-34;  // J s
    double k_B  = 1.380649e-23;    // J/K
    double c    = 299792458.0;     // m/s
    double u    = 1.66053906660e-27; // kg, atomic mass unit
    double eps0 = 8.8541878128e-12;  // F/m
};

} // namespace levicool

#endif
