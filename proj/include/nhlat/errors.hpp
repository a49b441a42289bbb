#pragma once

#include <stdexcept>
#include <string>

namespace nhlat {

/// Invalid lattice/scenario configuration (bad parameters, malformed config
/// documents, references to missing sites). Maps to CLI exit code 2.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure of a numerical routine to meet its contract (eigensolver
/// non-convergence, residual bound violation). Maps to CLI exit code 3.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, int dimension = 0, double residual = 0.0)
        : std::runtime_error(what), dimension(dimension), residual(residual) {}

    int dimension;
    double residual;
};

/// Branch tracking lost a mode between two sweep grid points. Carries the
/// parameter interval to refine.
class tracking_error : public numerical_error {
public:
    tracking_error(const std::string& what, double lo, double hi, double overlap)
        : numerical_error(what), lo(lo), hi(hi), overlap(overlap) {}

    double lo;
    double hi;
    double overlap;
};

/// Spectrum admits no perfect (E, -E*) matching: the lattice breaks the
/// bipartite gain/loss structure. Carries the worst unpaired eigenvalues.
class symmetry_error : public std::runtime_error {
public:
    symmetry_error(const std::string& what, std::string offenders)
        : std::runtime_error(what), offenders(std::move(offenders)) {}

    std::string offenders;
};

} // namespace nhlat
