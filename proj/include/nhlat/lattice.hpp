#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace nhlat {

enum class Region { system1, reservoir, system2 };

std::string to_string(Region r);
Region region_from_string(const std::string& s);

/// One undirected real bond between global sites a and b.
struct Coupling {
    int a;
    int b;
    double amplitude;
};

/// A tight-binding graph over contiguously indexed sites (1-based global
/// indices, matching the figure conventions: system 1 starts at site 1, the
/// reservoir typically at site 10). Couplings are real and symmetric; on-site
/// potentials are purely imaginary (gain/loss only). Immutable by convention
/// once built: the builders below return finished graphs.
class LatticeGraph {
public:
    LatticeGraph(int n_sites, int first_index = 1);

    int size() const { return static_cast<int>(onsite_.size()); }
    int first_index() const { return first_index_; }
    int last_index() const { return first_index_ + size() - 1; }
    bool contains(int site) const { return site >= first_index_ && site <= last_index(); }

    std::complex<double> onsite(int site) const { return onsite_[offset(site)]; }
    Region region(int site) const { return regions_[offset(site)]; }
    const std::vector<Coupling>& couplings() const { return couplings_; }

    /// Purely imaginary on-site potentials only; a nonzero real part is a
    /// configuration error.
    void set_onsite(int site, std::complex<double> value);
    void set_region(int site, Region r);
    void set_region_all(Region r);

    /// Adds bond (i, j). Self-couplings and duplicate edges are rejected.
    void add_coupling(int i, int j, double amplitude);

    bool has_coupling(int i, int j) const;
    double coupling_amplitude(int i, int j) const;
    std::vector<int> neighbors(int site) const;
    std::vector<int> sites() const;
    std::vector<int> sites_in(Region r) const;

    /// Dense Hamiltonian: H(n,n) = onsite, H(i,j) = H(j,i) = bond amplitude.
    /// Row/column k corresponds to global site first_index() + k.
    Eigen::MatrixXcd to_matrix() const;

    /// Matrix row/col for a global site index.
    int matrix_index(int site) const { return offset(site); }

    /// Copy with all site indices shifted by delta (bonds and per-site data
    /// carried along).
    LatticeGraph shifted_indices(int delta) const;

private:
    int offset(int site) const;

    int first_index_;
    std::vector<std::complex<double>> onsite_;
    std::vector<Region> regions_;
    std::vector<Coupling> couplings_;
};

/// SSH-type chain: bonds alternate t_a (after odd site index) and t_b (after
/// even site index); every site carries on-site -i kappa0. n_sites must be odd
/// so that the isolated chain supports a single zero mode.
LatticeGraph build_ssh(int n_sites, double t_a, double t_b, double kappa0);

/// Uniform chain with bond t and alternating on-site +i gamma (globally even
/// site index) / -i gamma (odd); global indices start at start_index, so the
/// gain/loss assignment follows the continued site count.
LatticeGraph build_reservoir(int n_sites, double t, double gamma, int start_index);

/// Disjoint union of a and b with one bond (site_a, site_b, t_prime). b's
/// indices are shifted to continue a's; site_b refers to the final (shifted)
/// indexing. The example composition join(ssh9, reservoir(10, start=10), 9, 10, tp)
/// therefore leaves the reservoir indices untouched.
LatticeGraph join(const LatticeGraph& a, const LatticeGraph& b,
                  int site_a, int site_b, double t_prime);

/// Quasi-1D Lieb (stub) chain used as a reservoir termination: a backbone of
/// corner/edge-center sites with vertical stub sites on every corner, ending
/// in a vertically coupled pair. n_sites must be of the form 3j - 1 (11 by
/// default: backbone 7 + stubs 4). All bonds t, on-site 0. The construction is
/// verified to host exactly j - 1 zero modes, all with zero amplitude at the
/// contact (first) site; a violation is an internal consistency error.
LatticeGraph build_lieb_tail(int n_sites, double t);

/// Three-site uniform chain (path), couplings t, on-site 0; its isolated zero
/// mode is (1, 0, -1)/sqrt(2).
LatticeGraph build_three_site_tail(double t);

/// Copy with every on-site potential decreased by i kappa (uniform extra loss
/// for kappa > 0). Eigenvalues shift by exactly -i kappa; eigenvectors are
/// unchanged.
LatticeGraph add_uniform_shift(const LatticeGraph& g, double kappa);

/// Site-reversal image (site k -> first + last - k), bonds and per-site data
/// carried along. mirror(mirror(g)) == g.
LatticeGraph mirror_reflect(const LatticeGraph& g);

// ---------------------------------------------------------------------------
// Preset configurations
// ---------------------------------------------------------------------------

enum class PresetVariant {
    single_system_reservoir, // system (9) + reservoir (10), open right end
    reservoir_lieb,          // + 11-site Lieb termination
    reservoir_three_site,    // + 3-site termination on a diamond junction
    mirror_bridge,           // two mirror systems bridged by an 11-site reservoir
};

std::string to_string(PresetVariant v);
PresetVariant preset_from_string(const std::string& name);

/// Physical parameters in units of t (t itself kept for dimensional clarity).
struct PresetParams {
    double t = 1.0;
    double t_a = 0.2;
    double t_b = 1.0;
    double kappa0 = 1.0;
    double gamma = 2.0;
    int system_sites = 9;
    int reservoir_sites = 0; // 0 -> variant default (10, or 11 for the bridge)
};

/// Build a preset lattice at coupling t_prime. The system block is oriented
/// with its weak bond (t_a) adjacent to the reservoir, which is the
/// configuration whose zero mode hybridizes with the reservoir; terminations
/// attach to the reservoir's far end with bond t.
LatticeGraph build_preset(PresetVariant v, const PresetParams& p, double t_prime);

/// The same preset as a one-parameter family in t_prime.
std::function<LatticeGraph(double)> preset_family(PresetVariant v, PresetParams p);

} // namespace nhlat
