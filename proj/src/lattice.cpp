#include "nhlat/lattice.hpp"

#include "nhlat/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace nhlat {

std::string to_string(Region r)
{
    switch (r) {
    case Region::system1:   return "system1";
    case Region::reservoir: return "reservoir";
    case Region::system2:   return "system2";
    }
    return "?";
}

Region region_from_string(const std::string& s)
{
    if (s == "system1")   return Region::system1;
    if (s == "reservoir") return Region::reservoir;
    if (s == "system2")   return Region::system2;
    throw config_error("unknown region tag '" + s + "'");
}

LatticeGraph::LatticeGraph(int n_sites, int first_index)
    : first_index_(first_index),
      onsite_(static_cast<size_t>(n_sites), std::complex<double>(0.0, 0.0)),
      regions_(static_cast<size_t>(n_sites), Region::system1)
{
    if (n_sites <= 0)
        throw config_error("LatticeGraph: n_sites must be positive");
}

int LatticeGraph::offset(int site) const
{
    if (!contains(site))
        throw config_error("site " + std::to_string(site) + " outside lattice range [" +
                           std::to_string(first_index_) + ", " +
                           std::to_string(last_index()) + "]");
    return site - first_index_;
}

void LatticeGraph::set_onsite(int site, std::complex<double> value)
{
    if (value.real() != 0.0)
        throw config_error("on-site potential at site " + std::to_string(site) +
                           " must be purely imaginary");
    onsite_[offset(site)] = value;
}

void LatticeGraph::set_region(int site, Region r)
{
    regions_[offset(site)] = r;
}

void LatticeGraph::set_region_all(Region r)
{
    std::fill(regions_.begin(), regions_.end(), r);
}

void LatticeGraph::add_coupling(int i, int j, double amplitude)
{
    offset(i);
    offset(j);
    if (i == j)
        throw config_error("self-coupling at site " + std::to_string(i));
    if (has_coupling(i, j))
        throw config_error("duplicate coupling (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    couplings_.push_back({i, j, amplitude});
}

bool LatticeGraph::has_coupling(int i, int j) const
{
    for (const auto& c : couplings_)
        if ((c.a == i && c.b == j) || (c.a == j && c.b == i))
            return true;
    return false;
}

double LatticeGraph::coupling_amplitude(int i, int j) const
{
    for (const auto& c : couplings_)
        if ((c.a == i && c.b == j) || (c.a == j && c.b == i))
            return c.amplitude;
    throw config_error("no coupling between sites " + std::to_string(i) + " and " +
                       std::to_string(j));
}

std::vector<int> LatticeGraph::neighbors(int site) const
{
    offset(site);
    std::vector<int> out;
    for (const auto& c : couplings_) {
        if (c.a == site)
            out.push_back(c.b);
        else if (c.b == site)
            out.push_back(c.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> LatticeGraph::sites() const
{
    std::vector<int> out(static_cast<size_t>(size()));
    for (int k = 0; k < size(); ++k)
        out[static_cast<size_t>(k)] = first_index_ + k;
    return out;
}

std::vector<int> LatticeGraph::sites_in(Region r) const
{
    std::vector<int> out;
    for (int k = 0; k < size(); ++k)
        if (regions_[static_cast<size_t>(k)] == r)
            out.push_back(first_index_ + k);
    return out;
}

Eigen::MatrixXcd LatticeGraph::to_matrix() const
{
    const int n = size();
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        h(k, k) = onsite_[static_cast<size_t>(k)];
    for (const auto& c : couplings_) {
        const int i = c.a - first_index_;
        const int j = c.b - first_index_;
        h(i, j) = c.amplitude;
        h(j, i) = c.amplitude;
    }
    return h;
}

LatticeGraph LatticeGraph::shifted_indices(int delta) const
{
    LatticeGraph out(size(), first_index_ + delta);
    out.onsite_ = onsite_;
    out.regions_ = regions_;
    out.couplings_ = couplings_;
    for (auto& c : out.couplings_) {
        c.a += delta;
        c.b += delta;
    }
    return out;
}

LatticeGraph build_ssh(int n_sites, double t_a, double t_b, double kappa0)
{
    if (n_sites <= 0 || n_sites % 2 == 0)
        throw config_error("build_ssh: n_sites must be odd and positive (got " +
                           std::to_string(n_sites) + "); an even chain loses the "
                           "single-edge-mode guarantee");
    if (n_sites > 1 && (t_a <= 0.0 || t_b <= 0.0))
        throw config_error("build_ssh: couplings t_a, t_b must be positive");

    LatticeGraph g(n_sites, 1);
    g.set_region_all(Region::system1);
    for (int k = 1; k < n_sites; ++k)
        g.add_coupling(k, k + 1, (k % 2 == 1) ? t_a : t_b);
    for (int k = 1; k <= n_sites; ++k)
        g.set_onsite(k, std::complex<double>(0.0, -kappa0));
    return g;
}

LatticeGraph build_reservoir(int n_sites, double t, double gamma, int start_index)
{
    if (t <= 0.0)
        throw config_error("build_reservoir: coupling t must be positive");
    if (gamma < 0.0)
        throw config_error("build_reservoir: gamma must be nonnegative");

    LatticeGraph g(n_sites, start_index);
    g.set_region_all(Region::reservoir);
    for (int k = start_index; k < start_index + n_sites - 1; ++k)
        g.add_coupling(k, k + 1, t);
    for (int k = start_index; k < start_index + n_sites; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0; // even index: gain
        g.set_onsite(k, std::complex<double>(0.0, sign * gamma));
    }
    return g;
}

LatticeGraph join(const LatticeGraph& a, const LatticeGraph& b,
                  int site_a, int site_b, double t_prime)
{
    if (!a.contains(site_a))
        throw config_error("join: site_a " + std::to_string(site_a) + " not in first graph");

    const int delta = a.last_index() + 1 - b.first_index();
    const LatticeGraph bs = b.shifted_indices(delta);
    if (!bs.contains(site_b))
        throw config_error("join: site_b " + std::to_string(site_b) +
                           " not in second graph (sites " + std::to_string(bs.first_index()) +
                           ".." + std::to_string(bs.last_index()) + " after joining)");

    LatticeGraph out(a.size() + b.size(), a.first_index());
    for (int s = a.first_index(); s <= a.last_index(); ++s) {
        out.set_onsite(s, a.onsite(s));
        out.set_region(s, a.region(s));
    }
    for (int s = bs.first_index(); s <= bs.last_index(); ++s) {
        out.set_onsite(s, bs.onsite(s));
        out.set_region(s, bs.region(s));
    }
    for (const auto& c : a.couplings())
        out.add_coupling(c.a, c.b, c.amplitude);
    for (const auto& c : bs.couplings())
        out.add_coupling(c.a, c.b, c.amplitude);
    out.add_coupling(site_a, site_b, t_prime);
    return out;
}

LatticeGraph build_lieb_tail(int n_sites, double t)
{
    // Sites (local order, 1-based here; shifted by the caller via join):
    //   1..2j-1  backbone path, corners at odd positions
    //   2j-1+i   stub on corner 2i-1 (i = 1..j)
    // The last corner and its stub form the terminal vertically coupled pair.
    if (t <= 0.0)
        throw config_error("build_lieb_tail: coupling t must be positive");
    if (n_sites < 5 || (n_sites + 1) % 3 != 0)
        throw config_error("build_lieb_tail: n_sites must be 3j - 1 with j >= 2 (got " +
                           std::to_string(n_sites) + ")");
    const int j = (n_sites + 1) / 3;
    const int backbone = 2 * j - 1;

    LatticeGraph g(n_sites, 1);
    g.set_region_all(Region::system2);
    for (int k = 1; k < backbone; ++k)
        g.add_coupling(k, k + 1, t);
    for (int i = 1; i <= j; ++i)
        g.add_coupling(2 * i - 1, backbone + i, t);

    // The zero-mode structure is the testable content of this geometry:
    // exactly j - 1 zero modes, all dark at the contact site. Verify on the
    // real symmetric Hamiltonian and fail loudly on a geometry bug.
    Eigen::MatrixXd h = g.to_matrix().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw numerical_error("build_lieb_tail: eigensolver failed", n_sites, 0.0);
    int zero_count = 0;
    double contact_amp = 0.0;
    for (int k = 0; k < n_sites; ++k) {
        if (std::abs(solver.eigenvalues()(k)) <= 1e-9 * t) {
            ++zero_count;
            contact_amp = std::max(contact_amp, std::abs(solver.eigenvectors()(0, k)));
        }
    }
    if (zero_count != j - 1 || contact_amp > 1e-10)
        throw numerical_error("build_lieb_tail: geometry failed the zero-mode check (" +
                              std::to_string(zero_count) + " zero modes, contact amplitude " +
                              std::to_string(contact_amp) + ")", n_sites, contact_amp);
    return g;
}

LatticeGraph build_three_site_tail(double t)
{
    if (t <= 0.0)
        throw config_error("build_three_site_tail: coupling t must be positive");
    LatticeGraph g(3, 1);
    g.set_region_all(Region::system2);
    g.add_coupling(1, 2, t);
    g.add_coupling(2, 3, t);
    return g;
}

LatticeGraph add_uniform_shift(const LatticeGraph& g, double kappa)
{
    LatticeGraph out = g;
    for (int s = g.first_index(); s <= g.last_index(); ++s)
        out.set_onsite(s, g.onsite(s) - std::complex<double>(0.0, kappa));
    return out;
}

LatticeGraph mirror_reflect(const LatticeGraph& g)
{
    const int lo = g.first_index();
    const int hi = g.last_index();
    LatticeGraph out(g.size(), lo);
    for (int s = lo; s <= hi; ++s) {
        out.set_onsite(lo + hi - s, g.onsite(s));
        out.set_region(lo + hi - s, g.region(s));
    }
    for (const auto& c : g.couplings())
        out.add_coupling(lo + hi - c.a, lo + hi - c.b, c.amplitude);
    return out;
}

std::string to_string(PresetVariant v)
{
    switch (v) {
    case PresetVariant::single_system_reservoir: return "single_system_reservoir";
    case PresetVariant::reservoir_lieb:          return "reservoir_lieb";
    case PresetVariant::reservoir_three_site:    return "reservoir_three_site";
    case PresetVariant::mirror_bridge:           return "mirror_bridge";
    }
    return "?";
}

PresetVariant preset_from_string(const std::string& name)
{
    if (name == "single_system_reservoir") return PresetVariant::single_system_reservoir;
    if (name == "reservoir_lieb")          return PresetVariant::reservoir_lieb;
    if (name == "reservoir_three_site")    return PresetVariant::reservoir_three_site;
    if (name == "mirror_bridge")           return PresetVariant::mirror_bridge;
    throw config_error("unknown preset '" + name + "'");
}

namespace {

// System block oriented with the weak bond t_a adjacent to the reservoir:
// the isolated chain's zero mode then lives at the junction edge and
// hybridizes with the reservoir as t' grows. build_ssh places the weak bond
// first, so the joined system is its mirror image.
LatticeGraph junction_system(const PresetParams& p)
{
    return mirror_reflect(build_ssh(p.system_sites, p.t_a, p.t_b, p.kappa0));
}

void validate_params(const PresetParams& p)
{
    if (p.t <= 0.0)
        throw config_error("preset: t must be positive");
    if (p.gamma < 0.0 || p.kappa0 < 0.0)
        throw config_error("preset: gamma and kappa0 must be nonnegative");
}

} // namespace

LatticeGraph build_preset(PresetVariant v, const PresetParams& p, double t_prime)
{
    validate_params(p);
    const int n_sys = p.system_sites;
    const int n_res = p.reservoir_sites > 0
                          ? p.reservoir_sites
                          : (v == PresetVariant::mirror_bridge ? 11 : 10);
    const LatticeGraph sys = junction_system(p);
    const LatticeGraph res = build_reservoir(n_res, p.t, p.gamma, n_sys + 1);
    LatticeGraph core = join(sys, res, n_sys, n_sys + 1, t_prime);
    const int res_end = n_sys + n_res;

    switch (v) {
    case PresetVariant::single_system_reservoir:
        return core;

    case PresetVariant::reservoir_lieb:
        return join(core, build_lieb_tail(11, p.t), res_end, res_end + 1, p.t);

    case PresetVariant::reservoir_three_site: {
        // Diamond junction: the reservoir end couples to both outer tail
        // sites, so their inputs cancel in a zero mode and the tail's middle
        // site carries the extension.
        LatticeGraph g = join(core, build_three_site_tail(p.t), res_end, res_end + 1, p.t);
        g.add_coupling(res_end, res_end + 3, p.t);
        return g;
    }

    case PresetVariant::mirror_bridge: {
        LatticeGraph sys2 = mirror_reflect(sys);
        sys2.set_region_all(Region::system2);
        return join(core, sys2, res_end, res_end + 1, t_prime);
    }
    }
    throw config_error("build_preset: unhandled variant");
}

std::function<LatticeGraph(double)> preset_family(PresetVariant v, PresetParams p)
{
    return [v, p](double t_prime) { return build_preset(v, p, t_prime); };
}

} // namespace nhlat
