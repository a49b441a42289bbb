#pragma once

#include "nhlat/lattice.hpp"
#include "nhlat/spectral.hpp"

#include <complex>
#include <vector>

namespace nhlat {

/// Localization exponent of the step-2 reservoir recurrence
/// psi_n = 2 alpha psi_{n-2} - psi_{n-4} for a zero mode: alpha = gamma^2/(2 t^2) - 1.
/// alpha == 1 (gamma = 2t) is the linear-localization point.
double alpha_from_gamma(double gamma, double t);

// The site-list diagnostics below address the mode vector by global site
// index on a lattice whose first site is 1 (vector entry = site - 1).

/// Max over interior reservoir sites of |psi_n - 2 alpha psi_{n-2} + psi_{n-4}|,
/// normalized by the largest |psi| in the region. The site list must be
/// consecutive and hold at least 5 sites.
double recurrence_residual(const Mode& mode, const std::vector<int>& reservoir_sites,
                           double alpha);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0; // max |fit - data| / max |psi| over the sites
};

/// Least-squares line through |psi_n| vs site index n (>= 3 sites).
LinearFit linear_fit(const Mode& mode, const std::vector<int>& sites);

struct IntensityStats {
    double mean = 0.0;
    double relative_std = 0.0; // std(|psi|^2) / mean(|psi|^2)
};

struct PhaseStats {
    double circular_mean = 0.0;   // arg of the mean resultant vector
    double circular_spread = 0.0; // sqrt(-2 ln R), R = mean resultant length
};

struct ConstantIntensityMetrics {
    IntensityStats intensity;               // over all reservoir sites
    PhaseStats phase_even;                  // even-index (gain) sublattice
    PhaseStats phase_odd;                   // odd-index (loss) sublattice
    std::vector<double> neighbor_phase_diffs; // arg(psi_gain) - arg(psi_loss) per bond
};

/// Intensity and per-sublattice circular phase statistics over the reservoir,
/// plus the gain-relative phase step across each reservoir bond (+pi/2 means
/// the gain site leads its loss neighbor).
ConstantIntensityMetrics constant_intensity_metrics(const Mode& mode,
                                                    const std::vector<int>& reservoir_sites);

/// Energy flux into site n from site m across bond (n, m):
/// J = i t_{nm} psi_m^* psi_n + c.c. Negative means power flows from n to m.
double edge_flux(const Mode& mode, const LatticeGraph& lattice, int n, int m);

/// Per-site continuity residual
/// |2 Im(E) |psi_n|^2 - 2 Im(V_n) |psi_n|^2 - sum_m J_{n,m}|, an exact
/// identity for eigenmodes. Indexed by matrix row (site - first_index).
std::vector<double> continuity_check(const Mode& mode, const LatticeGraph& lattice);

/// |psi| at the reservoir's junction gain site over |psi| at the adjacent
/// system-1 edge site; equals t'/t for a constant-intensity zero mode. The
/// mode must pass the constant-intensity metrics first (precondition).
double edge_amplitude_ratio(const Mode& mode, const LatticeGraph& lattice);

/// All diagnostics for one mode, for serialization.
struct AnalysisReport {
    std::complex<double> energy;
    double alpha = 0.0;
    double recurrence = 0.0;
    LinearFit fit_even;
    LinearFit fit_odd;
    IntensityStats intensity;
    PhaseStats phase_even;
    PhaseStats phase_odd;
    std::vector<double> neighbor_phase_diffs;
    struct Flux {
        int from;
        int to;
        double value;
    };
    std::vector<Flux> fluxes;                 // J_{a,b} for every lattice bond (a, b)
    std::vector<double> continuity_residuals; // per site
};

AnalysisReport analyze_mode(const Mode& mode, const LatticeGraph& lattice, double alpha);

} // namespace nhlat
