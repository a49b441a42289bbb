#include "nhlat/analysis.hpp"

#include "nhlat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nhlat {

namespace {

std::complex<double> amp_at(const Mode& mode, const LatticeGraph& g, int site)
{
    return mode.vector(g.matrix_index(site));
}

double max_abs_over(const Mode& mode, const LatticeGraph& g, const std::vector<int>& sites)
{
    double mx = 0.0;
    for (int s : sites)
        mx = std::max(mx, std::abs(amp_at(mode, g, s)));
    return mx;
}

void require_consecutive(const std::vector<int>& sites, const char* who)
{
    for (size_t k = 1; k < sites.size(); ++k)
        if (sites[k] != sites[k - 1] + 1)
            throw config_error(std::string(who) + ": site list must be consecutive");
}

PhaseStats circular_stats(const std::vector<double>& phases)
{
    PhaseStats out;
    if (phases.empty())
        return out;
    std::complex<double> resultant = 0.0;
    for (double p : phases)
        resultant += std::polar(1.0, p);
    resultant /= static_cast<double>(phases.size());
    out.circular_mean = std::arg(resultant);
    const double r = std::min(1.0, std::abs(resultant));
    out.circular_spread = std::sqrt(std::max(0.0, -2.0 * std::log(std::max(r, 1e-300))));
    return out;
}

} // namespace

double alpha_from_gamma(double gamma, double t)
{
    if (t <= 0.0)
        throw config_error("alpha_from_gamma: t must be positive");
    return gamma * gamma / (2.0 * t * t) - 1.0;
}

double recurrence_residual(const Mode& mode, const std::vector<int>& reservoir_sites,
                           double alpha)
{
    if (reservoir_sites.size() < 5)
        throw config_error("recurrence_residual: need at least 5 consecutive reservoir sites");
    require_consecutive(reservoir_sites, "recurrence_residual");

    const int n = static_cast<int>(reservoir_sites.size());
    // Global sites address the mode vector of a 1-based lattice.
    auto at = [&](int site) { return mode.vector(site - 1); };

    double mx = 0.0;
    for (int s : reservoir_sites)
        mx = std::max(mx, std::abs(at(s)));
    if (mx == 0.0)
        return 0.0;

    double worst = 0.0;
    for (int k = 4; k < n; ++k) {
        const int s = reservoir_sites[static_cast<size_t>(k)];
        const std::complex<double> r = at(s) - 2.0 * alpha * at(s - 2) + at(s - 4);
        worst = std::max(worst, std::abs(r));
    }
    return worst / mx;
}

LinearFit linear_fit(const Mode& mode, const std::vector<int>& sites)
{
    if (sites.size() < 3)
        throw config_error("linear_fit: need at least 3 sites");

    auto at = [&](int site) { return std::abs(mode.vector(site - 1)); };
    const int n = static_cast<int>(sites.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, mx = 0.0;
    for (int s : sites) {
        const double x = static_cast<double>(s);
        const double y = at(s);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        mx = std::max(mx, y);
    }
    const double denom = n * sxx - sx * sx;
    LinearFit out;
    out.slope = (n * sxy - sx * sy) / denom;
    out.intercept = (sy - out.slope * sx) / n;
    double worst = 0.0;
    for (int s : sites)
        worst = std::max(worst, std::abs(out.slope * s + out.intercept - at(s)));
    out.max_abs_residual = (mx > 0.0) ? worst / mx : worst;
    return out;
}

ConstantIntensityMetrics constant_intensity_metrics(const Mode& mode,
                                                    const std::vector<int>& reservoir_sites)
{
    require_consecutive(reservoir_sites, "constant_intensity_metrics");
    std::vector<int> even, odd;
    for (int s : reservoir_sites)
        (s % 2 == 0 ? even : odd).push_back(s);
    if (even.size() < 2 || odd.size() < 2)
        throw config_error("constant_intensity_metrics: need at least 2 sites per sublattice");

    auto at = [&](int site) { return mode.vector(site - 1); };

    ConstantIntensityMetrics out;
    double sum = 0.0, sum2 = 0.0;
    for (int s : reservoir_sites) {
        const double i = std::norm(at(s));
        sum += i;
        sum2 += i * i;
    }
    const double n = static_cast<double>(reservoir_sites.size());
    out.intensity.mean = sum / n;
    const double var = std::max(0.0, sum2 / n - out.intensity.mean * out.intensity.mean);
    out.intensity.relative_std =
        (out.intensity.mean > 0.0) ? std::sqrt(var) / out.intensity.mean : 0.0;

    std::vector<double> ph_even, ph_odd;
    for (int s : even)
        ph_even.push_back(std::arg(at(s)));
    for (int s : odd)
        ph_odd.push_back(std::arg(at(s)));
    out.phase_even = circular_stats(ph_even);
    out.phase_odd = circular_stats(ph_odd);

    // Phase step across each reservoir bond, oriented gain -> loss. Even
    // global index is the gain sublattice.
    for (size_t k = 0; k + 1 < reservoir_sites.size(); ++k) {
        const int a = reservoir_sites[k];
        const int b = reservoir_sites[k + 1];
        const int gain = (a % 2 == 0) ? a : b;
        const int loss = (a % 2 == 0) ? b : a;
        out.neighbor_phase_diffs.push_back(std::arg(at(gain) * std::conj(at(loss))));
    }
    return out;
}

double edge_flux(const Mode& mode, const LatticeGraph& lattice, int n, int m)
{
    if (!lattice.has_coupling(n, m))
        throw config_error("edge_flux: (" + std::to_string(n) + ", " + std::to_string(m) +
                           ") is not an edge");
    const double t_nm = lattice.coupling_amplitude(n, m);
    const std::complex<double> cross =
        std::complex<double>(0.0, 1.0) * t_nm * std::conj(amp_at(mode, lattice, m)) *
        amp_at(mode, lattice, n);
    return 2.0 * cross.real();
}

std::vector<double> continuity_check(const Mode& mode, const LatticeGraph& lattice)
{
    const int n = lattice.size();
    std::vector<double> out(static_cast<size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        const int site = lattice.first_index() + k;
        const double intensity = std::norm(mode.vector(k));
        double flux_sum = 0.0;
        for (int nb : lattice.neighbors(site))
            flux_sum += edge_flux(mode, lattice, site, nb);
        out[static_cast<size_t>(k)] =
            std::abs(2.0 * mode.energy.imag() * intensity -
                     2.0 * lattice.onsite(site).imag() * intensity - flux_sum);
    }
    return out;
}

double edge_amplitude_ratio(const Mode& mode, const LatticeGraph& lattice)
{
    const std::vector<int> res = lattice.sites_in(Region::reservoir);
    if (res.empty())
        throw config_error("edge_amplitude_ratio: lattice has no reservoir region");
    const ConstantIntensityMetrics m = constant_intensity_metrics(mode, res);
    if (m.intensity.relative_std > 1e-6 ||
        m.phase_even.circular_spread > 1e-6 || m.phase_odd.circular_spread > 1e-6)
        throw config_error("edge_amplitude_ratio: mode is not a constant-intensity mode "
                           "(relative intensity std " +
                           std::to_string(m.intensity.relative_std) + ")");

    const int res_edge = res.front();
    const int sys_edge = res_edge - 1;
    if (!lattice.contains(sys_edge) || lattice.region(sys_edge) != Region::system1)
        throw config_error("edge_amplitude_ratio: no system-1 site adjacent to the reservoir");
    const double denom = std::abs(amp_at(mode, lattice, sys_edge));
    if (denom == 0.0)
        throw config_error("edge_amplitude_ratio: system edge amplitude vanishes");
    return std::abs(amp_at(mode, lattice, res_edge)) / denom;
}

AnalysisReport analyze_mode(const Mode& mode, const LatticeGraph& lattice, double alpha)
{
    if (lattice.first_index() != 1)
        throw config_error("analyze_mode: lattice must start at site 1 (the site-list "
                           "diagnostics address the mode vector as site - 1)");
    if (mode.vector.size() != lattice.size())
        throw config_error("analyze_mode: mode dimension does not match the lattice");

    AnalysisReport out;
    out.energy = mode.energy;
    out.alpha = alpha;

    const std::vector<int> res = lattice.sites_in(Region::reservoir);
    std::vector<int> even, odd;
    for (int s : res)
        (s % 2 == 0 ? even : odd).push_back(s);

    if (res.size() >= 5)
        out.recurrence = recurrence_residual(mode, res, alpha);
    if (even.size() >= 3)
        out.fit_even = linear_fit(mode, even);
    if (odd.size() >= 3)
        out.fit_odd = linear_fit(mode, odd);
    if (even.size() >= 2 && odd.size() >= 2) {
        const ConstantIntensityMetrics ci = constant_intensity_metrics(mode, res);
        out.intensity = ci.intensity;
        out.phase_even = ci.phase_even;
        out.phase_odd = ci.phase_odd;
        out.neighbor_phase_diffs = ci.neighbor_phase_diffs;
    }
    for (const auto& c : lattice.couplings())
        out.fluxes.push_back({c.a, c.b, edge_flux(mode, lattice, c.a, c.b)});
    out.continuity_residuals = continuity_check(mode, lattice);
    return out;
}

} // namespace nhlat
