#include "nhlat/spectral.hpp"

#include "nhlat/errors.hpp"
#include "nhlat/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

using namespace nhlat;
using std::complex;

namespace {

std::vector<double> make_grid(double lo, double hi, double step)
{
    std::vector<double> g;
    for (double v = lo; v <= hi + 0.5 * step; v += step)
        g.push_back(v);
    return g;
}

} // namespace

TEST_CASE("eigendecompose: hermitian dimer")
{
    Eigen::MatrixXcd h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    const auto modes = eigendecompose(h);
    REQUIRE(modes.size() == 2);
    CHECK(std::abs(modes[0].energy - complex<double>(-1.0, 0.0)) <= 1e-12);
    CHECK(std::abs(modes[1].energy - complex<double>(1.0, 0.0)) <= 1e-12);
    for (const auto& m : modes)
        CHECK(std::abs(m.vector.norm() - 1.0) <= 1e-12);
}

TEST_CASE("eigendecompose: gain/loss dimer (characteristic polynomial oracle)")
{
    // [[i g, t], [t, -i g]] has E^2 = t^2 - g^2; g = 2t gives +- i sqrt(3) t.
    Eigen::MatrixXcd h(2, 2);
    h << complex<double>(0.0, 2.0), 1.0, 1.0, complex<double>(0.0, -2.0);
    const auto modes = eigendecompose(h);
    const double s3 = std::sqrt(3.0);
    CHECK(std::abs(modes[0].energy - complex<double>(0.0, -s3)) <= 1e-12);
    CHECK(std::abs(modes[1].energy - complex<double>(0.0, s3)) <= 1e-12);
}

TEST_CASE("eigendecompose contracts: residual, trace, ordering, phase convention")
{
    const LatticeGraph g = build_preset(PresetVariant::mirror_bridge, {}, 1.07);
    const Eigen::MatrixXcd h = g.to_matrix();
    const auto modes = eigendecompose(h);
    REQUIRE(static_cast<int>(modes.size()) == h.rows());

    complex<double> sum = 0.0;
    for (const auto& m : modes) {
        CHECK((h * m.vector - m.energy * m.vector).norm() <= 1e-8 * h.norm());
        CHECK(std::abs(m.vector.norm() - 1.0) <= 1e-12);
        sum += m.energy;

        // phase convention: largest-magnitude component is real nonnegative
        int imax = 0;
        for (int i = 1; i < m.vector.size(); ++i)
            if (std::abs(m.vector(i)) > std::abs(m.vector(imax)))
                imax = i;
        CHECK(std::abs(m.vector(imax).imag()) <= 1e-12);
        CHECK(m.vector(imax).real() >= 0.0);
    }
    CHECK(std::abs(sum - h.trace()) <= 1e-8 * h.norm());

    for (size_t k = 1; k < modes.size(); ++k) {
        const auto a = modes[k - 1].energy;
        const auto b = modes[k].energy;
        CHECK((a.imag() < b.imag() || (a.imag() == b.imag() && a.real() <= b.real())));
    }

    CHECK_THROWS_AS(eigendecompose(Eigen::MatrixXcd::Zero(2, 3)), config_error);

    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigendecompose(bad), config_error);
}

TEST_CASE("composite spectrum at t' = 0 is the union of the parts")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const auto ev = eigenvalues_of(family(0.0).to_matrix());
    const auto sys_ev = eigenvalues_of(mirror_reflect(build_ssh(9, 0.2, 1.0, 1.0)).to_matrix());
    const auto res_ev = eigenvalues_of(build_reservoir(10, 1.0, 2.0, 10).to_matrix());
    std::vector<complex<double>> expected = sys_ev;
    expected.insert(expected.end(), res_ev.begin(), res_ev.end());
    for (const auto& e : expected) {
        double best = 1e9;
        for (const auto& f : ev)
            best = std::min(best, std::abs(e - f));
        CHECK(best <= 1e-10);
    }
}

TEST_CASE("nhph pairing holds for presets and reports zero modes")
{
    for (double tp : {0.0, 0.33, 0.8, 1.02, 1.25}) {
        const auto modes =
            eigendecompose(build_preset(PresetVariant::single_system_reservoir, {}, tp).to_matrix());
        const NhphPairing rep = check_nhph(modes, 1e-8);
        CHECK(rep.max_defect <= 1e-8);
        size_t covered = 0;
        for (const auto& [i, j] : rep.pairs)
            covered += (i == j) ? 1 : 2;
        CHECK(covered == modes.size());
        CHECK(!rep.zero_modes.empty()); // on-axis modes exist at every t'
    }
}

TEST_CASE("hermitian SSH spectrum pairs by sign negation")
{
    const auto modes = eigendecompose(build_ssh(9, 0.2, 1.0, 0.0).to_matrix());
    const NhphPairing rep = check_nhph(modes, 1e-8);
    for (const auto& [i, j] : rep.pairs) {
        const double re_i = modes[static_cast<size_t>(i)].energy.real();
        const double re_j = modes[static_cast<size_t>(j)].energy.real();
        CHECK(std::abs(re_i + re_j) <= 1e-8);
    }
}

TEST_CASE("a real on-site detuning breaks the pairing")
{
    LatticeGraph g = build_preset(PresetVariant::single_system_reservoir, {}, 1.0);
    // A real diagonal entry cannot be expressed through set_onsite (it guards
    // the invariant), so perturb the assembled matrix directly.
    Eigen::MatrixXcd h = g.to_matrix();
    h(4, 4) += 0.3;
    const auto modes = eigendecompose(h);
    CHECK_THROWS_AS(check_nhph(modes, 1e-8), symmetry_error);
    try {
        check_nhph(modes, 1e-8);
    } catch (const symmetry_error& e) {
        CHECK(!e.offenders.empty());
    }
}

TEST_CASE("sweep validates its grid")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    CHECK_THROWS_AS(sweep(family, {1.0}), config_error);
    CHECK_THROWS_AS(sweep(family, {1.0, 1.0}), config_error);
    CHECK_THROWS_AS(sweep(family, {1.2, 1.0}), config_error);
}

TEST_CASE("sweep tracks branches and finds the single zero crossing")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const SweepTrajectory traj = sweep(family, make_grid(0.9, 1.2, 0.005));
    CHECK(traj.branch_count() == 19);

    int crossings = 0;
    double t_cross = 0.0;
    for (const auto& e : traj.events)
        if (e.type == EventType::zero_crossing) {
            ++crossings;
            t_cross = e.t_prime;
        }
    CHECK(crossings == 1);
    CHECK(t_cross > 1.0);
    CHECK(t_cross < 1.1);

    // consecutive modes on a branch stay aligned
    for (const auto& branch : traj.branches)
        for (size_t k = 1; k < branch.size(); ++k)
            CHECK(std::abs(branch[k - 1].vector.dot(branch[k].vector)) >= 0.5);
}

TEST_CASE("mirror-bridge sweep shows exactly two zero crossings")
{
    const auto family = preset_family(PresetVariant::mirror_bridge, {});
    const SweepTrajectory traj = sweep(family, make_grid(0.9, 1.2, 0.005));
    int crossings = 0;
    for (const auto& e : traj.events)
        if (e.type == EventType::zero_crossing)
            ++crossings;
    CHECK(crossings == 2);
}

TEST_CASE("find_zero_mode pins the roots computed by the reference sweep")
{
    const auto fig1 = preset_family(PresetVariant::single_system_reservoir, {});
    const ZeroModeResult z1 = find_zero_mode(fig1, 1.0, 1.1, 1e-8);
    CHECK(std::abs(z1.mode.energy) <= 1e-8);
    CHECK(z1.t_star == doctest::Approx(1.05935).epsilon(1e-4));

    const auto fig3 = preset_family(PresetVariant::mirror_bridge, {});
    const ZeroModeResult zs = find_zero_mode(fig3, 0.95, 1.05, 1e-8);
    const ZeroModeResult za = find_zero_mode(fig3, 1.05, 1.20, 1e-8);
    CHECK(zs.t_star == doctest::Approx(1.01005).epsilon(1e-4));
    CHECK(za.t_star == doctest::Approx(1.10645).epsilon(1e-4));
}

TEST_CASE("find_zero_mode rejects brackets without a sign change")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    CHECK_THROWS_AS(find_zero_mode(family, 0.2, 0.5, 1e-8), config_error);
    CHECK_THROWS_AS(find_zero_mode(family, 1.1, 1.0, 1e-8), config_error);
}

TEST_CASE("find_zero_mode flags exceptional-point interference")
{
    // A bracket reaching past the EP at ~1.082: the branch acquires Re E
    // inside the bracket, so bisection cannot pin the root there.
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    CHECK_THROWS_AS(find_zero_mode(family, 1.0, 1.2, 1e-8), numerical_error);
}

TEST_CASE("exceptional point: branches II and III coalesce near 1.08")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const ApproachResult r = find_exceptional_point(family, 1.05, 1.12);
    CHECK(r.type == EventType::exceptional_point);
    CHECK(r.t_value == doctest::Approx(1.0817).epsilon(2e-3));
    CHECK(r.gap <= 1e-4);
    CHECK(r.overlap >= 0.99);
}

TEST_CASE("avoided crossing: branches I and III stay apart")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const ApproachResult r = find_exceptional_point(family, 0.55, 0.95);
    CHECK(r.type == EventType::avoided_crossing);
    CHECK(r.gap > 1e-4);
    CHECK(r.t_value == doctest::Approx(0.6877).epsilon(5e-3));
    CHECK(r.overlap < 0.99);
}

TEST_CASE("hermitian family has no exceptional point")
{
    PresetParams p;
    p.gamma = 0.0;
    p.kappa0 = 0.0;
    const auto family = preset_family(PresetVariant::single_system_reservoir, p);
    const ApproachResult r = find_exceptional_point(family, 0.5, 1.2);
    CHECK(r.type == EventType::avoided_crossing);
}

TEST_CASE("parity classification on the mirror bridge")
{
    const auto family = preset_family(PresetVariant::mirror_bridge, {});
    const ZeroModeResult zs = find_zero_mode(family, 0.95, 1.05, 1e-8);
    const ZeroModeResult za = find_zero_mode(family, 1.05, 1.20, 1e-8);
    const LatticeGraph ls = family(zs.t_star);
    const LatticeGraph la = family(za.t_star);
    CHECK(classify_parity(zs.mode, ls) == Parity::symmetric);
    CHECK(classify_parity(za.mode, la) == Parity::antisymmetric);

    // every mode of a mirror lattice is symmetric or antisymmetric here
    for (const auto& m : eigendecompose(ls.to_matrix()))
        CHECK(classify_parity(m, ls) != Parity::none);

    const LatticeGraph asym = build_preset(PresetVariant::single_system_reservoir, {}, 1.0);
    const auto modes = eigendecompose(asym.to_matrix());
    CHECK_THROWS_AS(classify_parity(modes[0], asym), config_error);
}

TEST_CASE("zero modes satisfy the sublattice-average condition")
{
    // Im E of a tuned zero mode equals the mean of the reservoir's gain and
    // loss, which vanishes for +- i gamma.
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const ZeroModeResult z = find_zero_mode(family, 1.0, 1.1, 1e-8);
    const LatticeGraph g = family(z.t_star);
    complex<double> mean = 0.0;
    for (int s : g.sites_in(Region::reservoir))
        mean += g.onsite(s);
    mean /= static_cast<double>(g.sites_in(Region::reservoir).size());
    CHECK(std::abs(z.mode.energy.imag() - mean.imag()) <= 1e-8 + std::abs(mean.imag()));
}

TEST_CASE("central branches stay on the imaginary axis below the EP")
{
    const auto family = preset_family(PresetVariant::single_system_reservoir, {});
    const SweepTrajectory traj = sweep(family, make_grid(0.0, 1.05, 0.005));
    // the four branches nearest E = 0 at t' = 0
    std::vector<std::pair<double, int>> by_dist;
    for (int b = 0; b < traj.branch_count(); ++b)
        by_dist.emplace_back(std::abs(traj.branches[static_cast<size_t>(b)][0].energy), b);
    std::sort(by_dist.begin(), by_dist.end());
    for (int k = 0; k < 4; ++k) {
        const auto& branch = traj.branches[static_cast<size_t>(by_dist[static_cast<size_t>(k)].second)];
        for (const auto& m : branch)
            CHECK(std::abs(m.energy.real()) <= 1e-8);
    }
}
