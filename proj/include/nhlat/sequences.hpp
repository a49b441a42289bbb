#pragma once

#include <complex>
#include <string>
#include <vector>

namespace nhlat {

/// 128-bit exact integer used for sequence terms. Wide enough for the scales
/// this library targets (e.g. Fibonacci up to m = 100); arithmetic on terms is
/// overflow-checked and throws std::overflow_error instead of wrapping.
using Int128 = __int128;

std::string to_string(Int128 v);

/// Parameter pair (P, Q) of a second-order integer recurrence
/// F_m = P F_{m-1} - Q F_{m-2}, together with its discriminant
/// D = P^2 - 4Q and characteristic roots a, b = (P +- sqrt(D))/2.
struct LucasParams {
    long long p = 0;
    long long q = 0;
    long long discriminant = 0;
    std::complex<double> root_a;
    std::complex<double> root_b;

    /// True when the characteristic roots coincide (exact integer test P^2 == 4Q).
    bool repeated_root() const { return discriminant == 0; }
};

LucasParams lucas_params(long long p, long long q);

/// The two complementary integer solutions U_0..U_m, V_0..V_m of the
/// recurrence, generated exactly (seeds U = 0, 1 and V = 2, P).
struct SequencePair {
    LucasParams params;
    std::vector<Int128> u_terms;
    std::vector<Int128> v_terms;
};

/// Generate both sequences up to index m_max by the exact integer recurrence.
/// Throws std::overflow_error naming the failing term if a value exceeds the
/// 128-bit range.
SequencePair lucas_pair(const LucasParams& params, int m_max);

/// Closed-form U_m = sum_{n=0}^{m-1} a^n b^{m-n-1}, evaluated in complex
/// arithmetic; the repeated-root case returns m s^{m-1} with s = P/2.
std::complex<double> closed_form_u(const LucasParams& params, int m);

/// Closed-form V_m = a^m + b^m; the repeated-root case returns 2 s^m.
std::complex<double> closed_form_v(const LucasParams& params, int m);

} // namespace nhlat
