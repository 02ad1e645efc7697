// constants.hpp — Physical constants for the nuclear-spin bath model (SI units)

#pragma once

namespace uddmag {

/// CODATA values plus the carbon number density of diamond. All SI.
struct PhysicalConstants {
    double gamma_e = 1.76085963023e11;   // electron gyromagnetic ratio [rad s^-1 T^-1]
    double gamma_c = 6.728284e7;         // 13C gyromagnetic ratio [rad s^-1 T^-1]
    double mu0_over_4pi = 1e-7;          // magnetic constant / 4pi [T^2 m^3 J^-1]
    double hbar = 1.054571817e-34;       // reduced Planck constant [J s]
    double mu_N = 5.0507837461e-27;      // nuclear magneton [J T^-1]
    double g_c = 1.4048236;              // 13C nuclear g factor (mu/mu_N / I, I = 1/2)
    double n_carbon = 1.77e29;           // carbon number density of diamond [m^-3]
                                         // (3.52 g/cm^3, 12 g/mol)
};

/// Throws std::domain_error if any value is non-positive or gamma_e is not
/// within 1% of 2pi * 2.80e10 Hz/T.
void validate(const PhysicalConstants& k);

inline const PhysicalConstants& default_constants() {
    static const PhysicalConstants k{};
    return k;
}

}  // namespace uddmag
