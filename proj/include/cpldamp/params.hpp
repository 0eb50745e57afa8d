#pragma once
// Circuit parameterization: the DC feeder, bus, and shunt-damper converter
// constants, plus the constant-power-load value. All SI base units.

#include <stdexcept>
#include <string>

namespace cpldamp {

struct PlantParams {
    double r1; // feeder resistance [Ohm]
    double L1; // feeder inductance [H]
    double C1; // bus capacitance [F]
    double E;  // source voltage [V]
    double r2; // damper inductor series resistance [Ohm]
    double L2; // damper inductance [H]
    double C2; // damper capacitance [F]
    double r3; // damper switching-loss resistance [Ohm]

    void validate() const {
        auto check = [](double v, const char* name) {
            if (!(v > 0.0))
                throw std::domain_error(std::string("plant parameter ") + name +
                                        " must be strictly positive");
        };
        check(r1, "r1"); check(L1, "L1"); check(C1, "C1"); check(E, "E");
        check(r2, "r2"); check(L2, "L2"); check(C2, "C2"); check(r3, "r3");
    }
};

// Reference 24 V network used by all built-in profiles and presets.
inline PlantParams default_plant() {
    return PlantParams{0.3, 85e-6, 200e-6, 24.0, 5e-3, 100e-6, 1e-3, 1000.0};
}

// True load power. Loads only draw (or are switched off); negative power is
// rejected here. Controller-side power *estimates* are plain doubles since
// they may legitimately go negative during transients.
struct CplPower {
    explicit CplPower(double w) : watts(w) {
        if (!(w >= 0.0))
            throw std::domain_error("CPL power must be >= 0 W");
    }
    double watts; // [W]
};

} // namespace cpldamp
