#include "nhlat/spectral.hpp"

#include "nhlat/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace nhlat {

namespace {

constexpr double kStaticZeroFloor = 1e-10; // |Im E| below this counts as a persistent zero

void fix_phase(Eigen::VectorXcd& v)
{
    int imax = 0;
    double best = -1.0;
    for (int i = 0; i < v.size(); ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best > 0.0)
        v *= std::conj(v(imax)) / best;
}

bool energy_less(const std::complex<double>& a, const std::complex<double>& b)
{
    if (a.imag() != b.imag())
        return a.imag() < b.imag();
    return a.real() < b.real();
}

std::string format_energy(const std::complex<double>& e)
{
    std::ostringstream os;
    os << e.real() << (e.imag() < 0 ? " - " : " + ") << std::abs(e.imag()) << "i";
    return os.str();
}

} // namespace

std::vector<Mode> eigendecompose(const Eigen::MatrixXcd& h)
{
    if (h.rows() != h.cols())
        throw config_error("eigendecompose: matrix must be square");
    const int n = static_cast<int>(h.rows());
    if (!h.allFinite())
        throw config_error("eigendecompose: matrix has non-finite entries");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigendecompose: iteration failed to converge for " +
                              std::to_string(n) + "x" + std::to_string(n) + " matrix", n);

    const double scale = h.norm(); // Frobenius
    std::vector<Mode> modes(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        Mode& m = modes[static_cast<size_t>(k)];
        m.energy = solver.eigenvalues()(k);
        m.vector = solver.eigenvectors().col(k);
        m.vector.normalize();
        fix_phase(m.vector);
        const double residual = (h * m.vector - m.energy * m.vector).norm();
        if (residual > 1e-8 * std::max(scale, 1e-300))
            throw numerical_error("eigendecompose: residual " + std::to_string(residual) +
                                  " exceeds contract for " + std::to_string(n) + "x" +
                                  std::to_string(n) + " matrix", n, residual);
    }
    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b) { return energy_less(a.energy, b.energy); });

    std::complex<double> sum = 0.0;
    for (const auto& m : modes)
        sum += m.energy;
    const double trace_err = std::abs(sum - h.trace());
    if (trace_err > 1e-8 * std::max(scale, 1e-300))
        throw numerical_error("eigendecompose: trace identity violated by " +
                              std::to_string(trace_err), n, trace_err);
    return modes;
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXcd& h)
{
    if (h.rows() != h.cols())
        throw config_error("eigenvalues_of: matrix must be square");
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(h, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigenvalues_of: iteration failed to converge",
                              static_cast<int>(h.rows()));
    std::vector<std::complex<double>> out(static_cast<size_t>(h.rows()));
    for (int k = 0; k < h.rows(); ++k)
        out[static_cast<size_t>(k)] = solver.eigenvalues()(k);
    std::sort(out.begin(), out.end(), energy_less);
    return out;
}

NhphPairing check_nhph(const std::vector<Mode>& modes, double tol)
{
    std::vector<std::complex<double>> energies;
    energies.reserve(modes.size());
    for (const auto& m : modes)
        energies.push_back(m.energy);
    return check_nhph(energies, tol);
}

NhphPairing check_nhph(const std::vector<std::complex<double>>& energies, double tol)
{
    const int n = static_cast<int>(energies.size());
    NhphPairing out;
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<std::pair<int, double>> offenders;

    for (int i = 0; i < n; ++i) {
        if (used[static_cast<size_t>(i)])
            continue;
        // Best partner under E_i = -conj(E_j); j == i is the self-paired case.
        int best_j = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = i; j < n; ++j) {
            if (used[static_cast<size_t>(j)])
                continue;
            const double defect = std::abs(energies[static_cast<size_t>(i)] +
                                           std::conj(energies[static_cast<size_t>(j)]));
            if (defect < best) {
                best = defect;
                best_j = j;
            }
        }
        used[static_cast<size_t>(i)] = true;
        if (best_j >= 0 && best <= tol) {
            used[static_cast<size_t>(best_j)] = true;
            out.pairs.emplace_back(i, best_j);
            if (best_j == i)
                out.zero_modes.push_back(i);
            out.max_defect = std::max(out.max_defect, best);
        } else {
            offenders.emplace_back(i, best);
        }
    }

    if (!offenders.empty()) {
        std::sort(offenders.begin(), offenders.end(),
                  [](const auto& a, const auto& b) { return a.second > b.second; });
        std::ostringstream os;
        for (size_t k = 0; k < offenders.size() && k < 5; ++k) {
            if (k)
                os << "; ";
            os << "E = " << format_energy(energies[static_cast<size_t>(offenders[k].first)])
               << " (defect " << offenders[k].second << ")";
        }
        throw symmetry_error("spectrum admits no (E, -E*) matching within tol = " +
                             std::to_string(tol) + "; gain/loss bipartite structure broken",
                             os.str());
    }
    return out;
}

std::string to_string(EventType t)
{
    switch (t) {
    case EventType::zero_crossing:     return "zero_crossing";
    case EventType::exceptional_point: return "exceptional_point";
    case EventType::avoided_crossing:  return "avoided_crossing";
    }
    return "?";
}

namespace {

struct Assignment {
    std::vector<int> to_new;  // branch -> new mode index
    double worst_overlap;
};

// Greedy maximal-overlap assignment between the previous branch vectors and a
// fresh set of modes; ties broken by eigenvalue proximity.
Assignment assign_branches(const std::vector<Mode>& prev, const std::vector<Mode>& next)
{
    const int n = static_cast<int>(prev.size());
    struct Cand {
        double overlap;
        double edist;
        int b;
        int m;
    };
    std::vector<Cand> cands;
    cands.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (int b = 0; b < n; ++b)
        for (int m = 0; m < n; ++m)
            cands.push_back({std::abs(prev[static_cast<size_t>(b)].vector.dot(
                                 next[static_cast<size_t>(m)].vector)),
                             std::abs(prev[static_cast<size_t>(b)].energy -
                                      next[static_cast<size_t>(m)].energy),
                             b, m});
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.overlap != y.overlap)
            return x.overlap > y.overlap;
        if (x.edist != y.edist)
            return x.edist < y.edist;
        if (x.b != y.b)
            return x.b < y.b;
        return x.m < y.m;
    });

    Assignment out;
    out.to_new.assign(static_cast<size_t>(n), -1);
    out.worst_overlap = 1.0;
    std::vector<bool> used_b(static_cast<size_t>(n), false), used_m(static_cast<size_t>(n), false);
    int assigned = 0;
    for (const auto& c : cands) {
        if (used_b[static_cast<size_t>(c.b)] || used_m[static_cast<size_t>(c.m)])
            continue;
        used_b[static_cast<size_t>(c.b)] = true;
        used_m[static_cast<size_t>(c.m)] = true;
        out.to_new[static_cast<size_t>(c.b)] = c.m;
        out.worst_overlap = std::min(out.worst_overlap, c.overlap);
        if (++assigned == n)
            break;
    }
    return out;
}

// Gap between the two eigenvalues nearest a frozen center; robust through a
// coalescence where overlap-based following degenerates.
struct PairProbe {
    double gap;
    int i;
    int j;
};

PairProbe pair_gap_at(const Eigen::MatrixXcd& h, std::complex<double> center)
{
    const auto ev = eigenvalues_of(h);
    const int n = static_cast<int>(ev.size());
    if (n < 2)
        throw config_error("pair gap needs at least two eigenvalues");
    int i0 = 0, i1 = 1;
    double d0 = std::abs(ev[0] - center), d1 = std::abs(ev[1] - center);
    if (d1 < d0) {
        std::swap(i0, i1);
        std::swap(d0, d1);
    }
    for (int k = 2; k < n; ++k) {
        const double d = std::abs(ev[static_cast<size_t>(k)] - center);
        if (d < d0) {
            i1 = i0;
            d1 = d0;
            i0 = k;
            d0 = d;
        } else if (d < d1) {
            i1 = k;
            d1 = d;
        }
    }
    return {std::abs(ev[static_cast<size_t>(i0)] - ev[static_cast<size_t>(i1)]), i0, i1};
}

ApproachResult refine_approach(const LatticeFamily& family, double lo, double hi,
                               std::complex<double> center, const SweepOptions& options)
{
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
        const double x1 = b - inv_phi * (b - a);
        const double x2 = a + inv_phi * (b - a);
        const double g1 = pair_gap_at(family(x1).to_matrix(), center).gap;
        const double g2 = pair_gap_at(family(x2).to_matrix(), center).gap;
        if (g1 < g2)
            b = x2;
        else
            a = x1;
    }
    const double t_min = 0.5 * (a + b);
    const auto modes = eigendecompose(family(t_min).to_matrix());
    int i0 = 0, i1 = 1;
    double d0 = std::abs(modes[0].energy - center), d1 = std::abs(modes[1].energy - center);
    if (d1 < d0) {
        std::swap(i0, i1);
        std::swap(d0, d1);
    }
    for (int k = 2; k < static_cast<int>(modes.size()); ++k) {
        const double d = std::abs(modes[static_cast<size_t>(k)].energy - center);
        if (d < d0) {
            i1 = i0;
            d1 = d0;
            i0 = k;
            d0 = d;
        } else if (d < d1) {
            i1 = k;
            d1 = d;
        }
    }
    ApproachResult out;
    out.t_value = t_min;
    out.gap = std::abs(modes[static_cast<size_t>(i0)].energy - modes[static_cast<size_t>(i1)].energy);
    out.overlap = std::abs(modes[static_cast<size_t>(i0)].vector.dot(modes[static_cast<size_t>(i1)].vector));
    out.type = (out.gap <= options.ep_gap_tol && out.overlap >= options.ep_overlap_min)
                   ? EventType::exceptional_point
                   : EventType::avoided_crossing;
    return out;
}

} // namespace

SweepTrajectory sweep(const LatticeFamily& family, const std::vector<double>& grid,
                      const SweepOptions& options)
{
    if (grid.size() < 2)
        throw config_error("sweep: grid needs at least two points");
    for (size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw config_error("sweep: grid must be strictly increasing");

    const size_t npts = grid.size();
    std::vector<Mode> current = eigendecompose(family(grid[0]).to_matrix());
    const int nb = static_cast<int>(current.size());

    SweepTrajectory out;
    out.grid = grid;
    out.branches.assign(static_cast<size_t>(nb), {});
    for (int b = 0; b < nb; ++b) {
        current[static_cast<size_t>(b)].branch_id = b;
        out.branches[static_cast<size_t>(b)].reserve(npts);
        out.branches[static_cast<size_t>(b)].push_back(current[static_cast<size_t>(b)]);
    }

    for (size_t k = 1; k < npts; ++k) {
        const std::vector<Mode> next = eigendecompose(family(grid[k]).to_matrix());
        const Assignment asg = assign_branches(current, next);
        if (asg.worst_overlap < options.overlap_floor)
            throw tracking_error(
                "sweep: branch tracking overlap " + std::to_string(asg.worst_overlap) +
                    " below floor in [" + std::to_string(grid[k - 1]) + ", " +
                    std::to_string(grid[k]) + "]; refine the grid there",
                grid[k - 1], grid[k], asg.worst_overlap);
        for (int b = 0; b < nb; ++b) {
            Mode m = next[static_cast<size_t>(asg.to_new[static_cast<size_t>(b)])];
            m.branch_id = b;
            out.branches[static_cast<size_t>(b)].push_back(m);
            current[static_cast<size_t>(b)] = std::move(m);
        }
    }

    if (!options.detect_events)
        return out;

    // Zero crossings: sign change of Im E on a branch pinned to the axis.
    for (int b = 0; b < nb; ++b) {
        const auto& br = out.branches[static_cast<size_t>(b)];
        for (size_t k = 1; k < npts; ++k) {
            const std::complex<double> e0 = br[k - 1].energy;
            const std::complex<double> e1 = br[k].energy;
            if (std::abs(e0.real()) > options.tol_re || std::abs(e1.real()) > options.tol_re)
                continue;
            if (std::abs(e0.imag()) <= kStaticZeroFloor || std::abs(e1.imag()) <= kStaticZeroFloor)
                continue; // persistent zero modes are not crossings
            if (e0.imag() * e1.imag() < 0.0) {
                const double frac = e0.imag() / (e0.imag() - e1.imag());
                out.events.push_back({EventType::zero_crossing,
                                      grid[k - 1] + frac * (grid[k] - grid[k - 1]), b, b,
                                      0.0, 0.0});
            }
        }
    }

    // Pair approaches: strict interior local minima of the branch-pair gap.
    for (int a = 0; a < nb; ++a) {
        for (int b = a + 1; b < nb; ++b) {
            const auto& ba = out.branches[static_cast<size_t>(a)];
            const auto& bb = out.branches[static_cast<size_t>(b)];
            for (size_t k = 1; k + 1 < npts; ++k) {
                const double gm = std::abs(ba[k - 1].energy - bb[k - 1].energy);
                const double g0 = std::abs(ba[k].energy - bb[k].energy);
                const double gp = std::abs(ba[k + 1].energy - bb[k + 1].energy);
                if (!(g0 < gm && g0 < gp && g0 < options.approach_gap_max))
                    continue;
                const std::complex<double> center = 0.5 * (ba[k].energy + bb[k].energy);
                ApproachResult r =
                    refine_approach(family, grid[k - 1], grid[k + 1], center, options);
                out.events.push_back({r.type, r.t_value, a, b, r.gap, r.overlap});
            }
        }
    }

    std::sort(out.events.begin(), out.events.end(), [](const SweepEvent& x, const SweepEvent& y) {
        if (x.t_prime != y.t_prime)
            return x.t_prime < y.t_prime;
        if (x.branch_a != y.branch_a)
            return x.branch_a < y.branch_a;
        return x.branch_b < y.branch_b;
    });
    return out;
}

ZeroModeResult find_zero_mode(const LatticeFamily& family, double lo, double hi, double tol_e)
{
    if (!(lo < hi))
        throw config_error("find_zero_mode: bracket must satisfy lo < hi");

    const std::vector<Mode> at_lo = eigendecompose(family(lo).to_matrix());
    const std::vector<Mode> at_hi = eigendecompose(family(hi).to_matrix());

    // Candidate branches: on the imaginary axis, moving (not persistent
    // zeros), changing the sign of Im E across the bracket when followed by
    // eigenvector overlap.
    int target = -1;
    double target_im = 0.0;
    for (int k = 0; k < static_cast<int>(at_lo.size()); ++k) {
        const auto& m = at_lo[static_cast<size_t>(k)];
        if (std::abs(m.energy.real()) > tol_e || std::abs(m.energy.imag()) <= kStaticZeroFloor)
            continue;
        int best = 0;
        double best_ov = -1.0;
        for (int j = 0; j < static_cast<int>(at_hi.size()); ++j) {
            const double ov = std::abs(m.vector.dot(at_hi[static_cast<size_t>(j)].vector));
            if (ov > best_ov) {
                best_ov = ov;
                best = j;
            }
        }
        if (m.energy.imag() * at_hi[static_cast<size_t>(best)].energy.imag() < 0.0) {
            if (target >= 0)
                throw config_error("find_zero_mode: multiple branches change sign in [" +
                                   std::to_string(lo) + ", " + std::to_string(hi) +
                                   "]; narrow the bracket");
            target = k;
            target_im = m.energy.imag();
        }
    }
    if (target < 0)
        throw config_error("find_zero_mode: no Im E sign change in bracket [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");

    Eigen::VectorXcd ref = at_lo[static_cast<size_t>(target)].vector;
    double a = lo, b = hi, im_a = target_im;
    Mode followed = at_lo[static_cast<size_t>(target)];
    std::vector<Mode> final_modes;
    int final_index = -1;
    // Stop once the branch energy is two decades inside the tolerance: pushing
    // |Im E| to the eigensolver's resolution would let the branch vector mix
    // with any exactly-degenerate persistent zero modes.
    const double stop_im = 0.01 * tol_e;
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        std::vector<Mode> modes = eigendecompose(family(mid).to_matrix());
        int best = 0;
        double best_ov = -1.0;
        for (int j = 0; j < static_cast<int>(modes.size()); ++j) {
            const double ov = std::abs(ref.dot(modes[static_cast<size_t>(j)].vector));
            if (ov > best_ov) {
                best_ov = ov;
                best = j;
            }
        }
        const Mode& m = modes[static_cast<size_t>(best)];
        if (std::abs(m.energy.real()) > std::max(tol_e, 1e-8))
            throw numerical_error("find_zero_mode: branch left the imaginary axis at t' = " +
                                  std::to_string(mid) + " (Re E = " +
                                  std::to_string(m.energy.real()) +
                                  "); exceptional-point interference",
                                  static_cast<int>(m.vector.size()), std::abs(m.energy.real()));
        followed = m;
        const bool converged = std::abs(m.energy.imag()) <= stop_im;
        if (converged || m.energy.imag() * im_a > 0.0) {
            if (!converged) {
                a = mid;
                im_a = m.energy.imag();
                ref = m.vector;
            }
        } else {
            b = mid;
        }
        final_modes = std::move(modes);
        final_index = best;
        if (converged) {
            a = b = mid;
            break;
        }
    }

    // Strip numerical leakage of persistent zero modes from the branch vector.
    // The Hamiltonians here are complex symmetric, so eigenvectors of distinct
    // eigenvalues are orthogonal under the unconjugated bilinear form; the
    // leaked component is exactly the bilinear projection onto each static mode.
    bool purified = false;
    for (int j = 0; j < static_cast<int>(final_modes.size()); ++j) {
        if (j == final_index)
            continue;
        const Mode& s = final_modes[static_cast<size_t>(j)];
        if (std::abs(s.energy) > kStaticZeroFloor)
            continue;
        const std::complex<double> btb = s.vector.cwiseProduct(s.vector).sum();
        if (std::abs(btb) < 0.1)
            continue; // quasi-null vector; bilinear projection undefined
        const std::complex<double> coeff =
            s.vector.cwiseProduct(followed.vector).sum() / btb;
        followed.vector -= coeff * s.vector;
        purified = true;
    }
    if (purified) {
        followed.vector.normalize();
        fix_phase(followed.vector);
    }

    if (std::abs(followed.energy) > tol_e)
        throw numerical_error("find_zero_mode: converged bracket but |E| = " +
                              std::to_string(std::abs(followed.energy)) +
                              " exceeds tolerance", static_cast<int>(followed.vector.size()),
                              std::abs(followed.energy));
    ZeroModeResult out;
    out.t_star = 0.5 * (a + b);
    out.mode = followed;
    return out;
}

ApproachResult find_exceptional_point(const LatticeFamily& family, double lo, double hi,
                                      const SweepOptions& options)
{
    if (!(lo < hi))
        throw config_error("find_exceptional_point: bracket must satisfy lo < hi");

    // Scan the bracket with tracked branches and locate the approaching pair:
    // the branch pair whose gap has the deepest interior local minimum. Pairs
    // that merely drift apart (their closest approach lies outside the
    // bracket) are not approach candidates.
    const int n_scan = std::max(16, static_cast<int>((hi - lo) / 0.005));
    std::vector<double> scan(static_cast<size_t>(n_scan) + 1);
    for (int k = 0; k <= n_scan; ++k)
        scan[static_cast<size_t>(k)] = lo + (hi - lo) * k / n_scan;
    SweepOptions scan_options = options;
    scan_options.detect_events = false;
    const SweepTrajectory traj = sweep(family, scan, scan_options);

    const int nb = traj.branch_count();
    double best_gap = std::numeric_limits<double>::infinity();
    size_t best_k = 0;
    std::complex<double> center = 0.0;
    bool found = false;
    for (int a = 0; a < nb; ++a)
        for (int b = a + 1; b < nb; ++b) {
            const auto& ba = traj.branches[static_cast<size_t>(a)];
            const auto& bb = traj.branches[static_cast<size_t>(b)];
            for (size_t k = 1; k + 1 < scan.size(); ++k) {
                const double gm = std::abs(ba[k - 1].energy - bb[k - 1].energy);
                const double g0 = std::abs(ba[k].energy - bb[k].energy);
                const double gp = std::abs(ba[k + 1].energy - bb[k + 1].energy);
                if (g0 < gm && g0 < gp && g0 < best_gap) {
                    best_gap = g0;
                    best_k = k;
                    center = 0.5 * (ba[k].energy + bb[k].energy);
                    found = true;
                }
            }
        }
    if (!found) {
        // No pair approaches inside the bracket; report the closest grid
        // configuration as an avoided crossing (certainly no coalescence).
        ApproachResult out;
        out.type = EventType::avoided_crossing;
        out.t_value = lo;
        out.gap = std::numeric_limits<double>::infinity();
        out.overlap = 0.0;
        for (size_t k = 0; k < scan.size(); ++k)
            for (int a = 0; a < nb; ++a)
                for (int b = a + 1; b < nb; ++b) {
                    const double g = std::abs(traj.branches[static_cast<size_t>(a)][k].energy -
                                              traj.branches[static_cast<size_t>(b)][k].energy);
                    if (g < out.gap) {
                        out.gap = g;
                        out.t_value = scan[k];
                        out.overlap = std::abs(
                            traj.branches[static_cast<size_t>(a)][k].vector.dot(
                                traj.branches[static_cast<size_t>(b)][k].vector));
                    }
                }
        return out;
    }
    return refine_approach(family, scan[best_k - 1], scan[best_k + 1], center, options);
}

std::string to_string(Parity p)
{
    switch (p) {
    case Parity::symmetric:     return "symmetric";
    case Parity::antisymmetric: return "antisymmetric";
    case Parity::none:          return "none";
    }
    return "?";
}

Parity classify_parity(const Mode& mode, const LatticeGraph& lattice)
{
    const Eigen::MatrixXcd h = lattice.to_matrix();
    const int n = static_cast<int>(h.rows());
    if (mode.vector.size() != n)
        throw config_error("classify_parity: mode dimension does not match lattice");

    double mirror_defect = 0.0;
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mirror_defect = std::max(mirror_defect,
                                     std::abs(h(i, j) - h(n - 1 - i, n - 1 - j)));
            scale = std::max(scale, std::abs(h(i, j)));
        }
    if (mirror_defect > 1e-12 * std::max(1.0, scale))
        throw config_error("classify_parity: lattice is not mirror-symmetric (defect " +
                           std::to_string(mirror_defect) + ")");

    std::complex<double> r = 0.0;
    for (int i = 0; i < n; ++i)
        r += std::conj(mode.vector(i)) * mode.vector(n - 1 - i);
    if (std::abs(r) < 0.999)
        return Parity::none;
    return r.real() >= 0.0 ? Parity::symmetric : Parity::antisymmetric;
}

} // namespace nhlat
