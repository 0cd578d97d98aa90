#pragma once

#include <cmath>
#include <stdexcept>

#include "nomacell/common.hpp"

namespace nomacell {

// Network and physical constants. SIR thresholds are stored linear; dB
// conversion happens once at the CLI boundary.
struct SystemParams {
    double lambda = 1.0;   // BS density (points per unit area)
    double nu = 5.0;       // user density
    double alpha = 4.0;    // path-loss exponent (> 2)
    double tau = 0.7;      // CC/CE boundary threshold, in (0, 1)
    double beta_c = 1.9952623149688795;  // 3 dB
    double beta_e = 0.5011872336272722;  // -3 dB
    double theta = 0.5;    // NOMA power fraction for the CC layer
    double eta = 0.5;      // OMA CC time fraction
    double rho = 9.0 / 7.0;  // correction factor of the distance model

    double delta() const { return 2.0 / alpha; }
    double beta(UserClass c) const { return c == UserClass::cc ? beta_c : beta_e; }

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("SystemParams: lambda must be > 0");
        if (!(nu > 0.0)) throw std::invalid_argument("SystemParams: nu must be > 0");
        if (!(alpha > 2.0))
            throw std::invalid_argument("SystemParams: alpha must be > 2 (finite interference)");
        if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("SystemParams: tau in (0,1)");
        if (!(beta_c > 0.0 && beta_e > 0.0))
            throw std::invalid_argument("SystemParams: SIR thresholds must be > 0 (linear)");
        if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("SystemParams: theta in (0,1)");
        if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("SystemParams: eta in (0,1)");
        if (!(rho > 0.0)) throw std::invalid_argument("SystemParams: rho must be > 0");
    }
};

// Traffic model: rate floors for P1, arrival/delay/outage parameters and
// EC floors for P2.
struct TrafficParams {
    double rate_floor_c = 0.1;   // bits/slot/Hz
    double rate_floor_e = 0.05;
    double arrival_c = 0.05;     // packets/slot, in (0, 1)
    double arrival_e = 0.05;
    double delay_thresh_c = 20.0;  // slots
    double delay_thresh_e = 30.0;
    double outage_cap_c = 0.2;
    double outage_cap_e = 0.2;
    double ec_floor_c = 0.05;    // packets/slot
    double ec_floor_e = 0.05;

    double rate_floor(UserClass c) const { return c == UserClass::cc ? rate_floor_c : rate_floor_e; }
    double arrival(UserClass c) const { return c == UserClass::cc ? arrival_c : arrival_e; }
    double delay_thresh(UserClass c) const { return c == UserClass::cc ? delay_thresh_c : delay_thresh_e; }
    double outage_cap(UserClass c) const { return c == UserClass::cc ? outage_cap_c : outage_cap_e; }
    double ec_floor(UserClass c) const { return c == UserClass::cc ? ec_floor_c : ec_floor_e; }

    void validate() const {
        if (!(arrival_c > 0.0 && arrival_c < 1.0 && arrival_e > 0.0 && arrival_e < 1.0))
            throw std::invalid_argument("TrafficParams: arrivals in (0,1)");
        if (!(delay_thresh_c >= 1.0 && delay_thresh_e >= 1.0))
            throw std::invalid_argument("TrafficParams: delay thresholds >= 1 slot");
        if (!(outage_cap_c > 0.0 && outage_cap_c < 1.0 && outage_cap_e > 0.0 && outage_cap_e < 1.0))
            throw std::invalid_argument("TrafficParams: outage caps in (0,1)");
        if (rate_floor_c < 0.0 || rate_floor_e < 0.0 || ec_floor_c < 0.0 || ec_floor_e < 0.0)
            throw std::invalid_argument("TrafficParams: floors must be >= 0");
    }
};

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

}  // namespace nomacell
