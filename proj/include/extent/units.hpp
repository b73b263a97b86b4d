#ifndef EXTENT_UNITS_HPP
#define EXTENT_UNITS_HPP

namespace extent {

// Fixed physical constants (SI). Not configurable.
namespace phys {
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double bohr_magneton     = 9.2740100783e-24; // J/T
inline constexpr double mu0               = 1.25663706212e-6; // H/m
inline constexpr double boltzmann         = 1.380649e-23;     // J/K
inline constexpr double pi                = 3.14159265358979323846;
} // namespace phys

// Unit multipliers for config/CLI values carried in scaled units.
namespace unit {
inline constexpr double ns = 1e-9;  // second
inline constexpr double ps = 1e-12; // second
inline constexpr double ua = 1e-6;  // ampere
inline constexpr double pj = 1e-12; // joule
inline constexpr double fc = 1e-15; // coulomb
inline constexpr double nm = 1e-9;  // metre
} // namespace unit

} // namespace extent

#endif
