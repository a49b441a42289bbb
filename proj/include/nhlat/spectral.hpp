#pragma once

#include "nhlat/lattice.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace nhlat {

/// One eigenpair: complex energy plus unit-norm eigenvector with a fixed
/// phase convention (largest-magnitude component real and nonnegative).
struct Mode {
    std::complex<double> energy;
    Eigen::VectorXcd vector;
    int branch_id = -1;
};

using LatticeFamily = std::function<LatticeGraph(double)>;

/// Dense non-Hermitian eigendecomposition. Modes are ordered by (Im E, Re E)
/// ascending. Contracts enforced on every call: per-mode residual
/// ||H v - E v|| <= 1e-8 ||H||_F and trace identity sum(E) == tr(H) within
/// 1e-8 ||H||_F; violations throw numerical_error with the dimension and the
/// residual achieved.
std::vector<Mode> eigendecompose(const Eigen::MatrixXcd& h);

/// Eigenvalues only (same ordering), for checks that need no vectors.
std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXcd& h);

/// Result of the particle-hole pairing test E_mu = -E_nu^*.
struct NhphPairing {
    std::vector<std::pair<int, int>> pairs; // (i, j) with i <= j; i == j marks self-paired
    std::vector<int> zero_modes;            // self-paired indices (|Re E| <= tol)
    double max_defect = 0.0;                // worst |E_i + conj(E_j)| over the matching
};

/// Perfect matching of the spectrum under E -> -E*. Throws symmetry_error
/// listing the worst offenders if no matching exists within tol (the lattice
/// then breaks the bipartite gain/loss structure).
NhphPairing check_nhph(const std::vector<Mode>& modes, double tol);
NhphPairing check_nhph(const std::vector<std::complex<double>>& energies, double tol);

enum class EventType { zero_crossing, exceptional_point, avoided_crossing };

std::string to_string(EventType t);

struct SweepEvent {
    EventType type;
    double t_prime;   // crossing estimate or refined approach location
    int branch_a;
    int branch_b;     // == branch_a for zero crossings
    double gap;       // refined minimum |E_a - E_b| (approach events)
    double overlap;   // eigenvector overlap modulus at the minimum
};

struct SweepOptions {
    double tol_re = 1e-8;          // "on the imaginary axis" tolerance
    double overlap_floor = 0.5;    // tracking sanity floor
    double ep_gap_tol = 1e-4;      // coalescence certification gap
    double ep_overlap_min = 0.99;  // coalescence certification vector alignment
    double approach_gap_max = 0.35; // only refine pair approaches tighter than this
    bool detect_events = true;
};

/// Eigenvalue branches tracked across a strictly increasing parameter grid.
/// branches[b][k] is branch b at grid[k]; branch identity follows maximal
/// eigenvector overlap from one grid point to the next.
struct SweepTrajectory {
    std::vector<double> grid;
    std::vector<std::vector<Mode>> branches;
    std::vector<SweepEvent> events;

    int branch_count() const { return static_cast<int>(branches.size()); }
};

/// Diagonalize the family on the grid and track branches greedily by
/// descending eigenvector overlap (ties broken by eigenvalue proximity). An
/// assigned overlap below the sanity floor raises tracking_error carrying the
/// grid interval to refine. Zero crossings, exceptional points, and avoided
/// crossings are recorded in events.
SweepTrajectory sweep(const LatticeFamily& family, const std::vector<double>& grid,
                      const SweepOptions& options = {});

struct ZeroModeResult {
    double t_star;
    Mode mode;
};

/// Bisection for Im E = 0 along the branch that changes sign across
/// [lo, hi], followed through eigenvector overlap. Branches that are
/// statically at E == 0 across the bracket (persistent dark modes) are not
/// candidates. Throws config_error if no (or more than one) branch changes
/// sign; throws numerical_error if the branch leaves the imaginary axis
/// (|Re E| > tol_e, exceptional-point interference).
ZeroModeResult find_zero_mode(const LatticeFamily& family, double lo, double hi,
                              double tol_e = 1e-8);

struct ApproachResult {
    EventType type; // exceptional_point or avoided_crossing
    double t_value;
    double gap;
    double overlap;
};

/// Golden-section minimization of the gap between the two branches that
/// approach inside [lo, hi] (selected as the closest eigenvalue pair at the
/// bracket midpoint; the pair is followed as the two eigenvalues nearest
/// their frozen midpoint). Certified as an exceptional point when the
/// refined gap <= ep_gap_tol and the eigenvector overlap >= ep_overlap_min;
/// otherwise reported as an avoided crossing.
ApproachResult find_exceptional_point(const LatticeFamily& family, double lo, double hi,
                                      const SweepOptions& options = {});

enum class Parity { symmetric, antisymmetric, none };

std::string to_string(Parity p);

/// Compare a mode with its site-reversal image on a mirror-symmetric lattice
/// (P H P == H is a precondition; violations throw config_error). Overlap
/// within 0.001 of +1 is symmetric, of -1 antisymmetric, anything else none.
Parity classify_parity(const Mode& mode, const LatticeGraph& lattice);

} // namespace nhlat
