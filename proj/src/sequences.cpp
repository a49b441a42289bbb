#include "nhlat/sequences.hpp"

#include "nhlat/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace nhlat {

std::string to_string(Int128 v)
{
    if (v == 0)
        return "0";
    const bool neg = v < 0;
    // Build digits from the magnitude; unsigned avoids overflow on INT128_MIN.
    unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v)
                                : static_cast<unsigned __int128>(v);
    std::string digits;
    while (mag > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (neg)
        digits.push_back('-');
    return {digits.rbegin(), digits.rend()};
}

LucasParams lucas_params(long long p, long long q)
{
    LucasParams out;
    out.p = p;
    out.q = q;
    out.discriminant = p * p - 4 * q;
    const std::complex<double> sqrt_d =
        std::sqrt(std::complex<double>(static_cast<double>(out.discriminant), 0.0));
    out.root_a = (static_cast<double>(p) + sqrt_d) / 2.0;
    out.root_b = (static_cast<double>(p) - sqrt_d) / 2.0;
    return out;
}

namespace {

// Integer power by repeated multiplication: std::pow(complex, n) goes through
// exp/log and returns NaN for 0^0, which occurs when a root is exactly zero.
std::complex<double> pow_int(std::complex<double> z, int n)
{
    std::complex<double> out = 1.0;
    for (int k = 0; k < n; ++k)
        out *= z;
    return out;
}

Int128 checked_next(Int128 p, Int128 q, Int128 f1, Int128 f2,
                    const char* name, int index)
{
    Int128 a, b, out;
    if (__builtin_mul_overflow(p, f1, &a) || __builtin_mul_overflow(q, f2, &b) ||
        __builtin_sub_overflow(a, b, &out)) {
        throw std::overflow_error("lucas_pair: exact integer overflow computing " +
                                  std::string(name) + "_" + std::to_string(index));
    }
    return out;
}

} // namespace

SequencePair lucas_pair(const LucasParams& params, int m_max)
{
    if (m_max < 0)
        throw config_error("lucas_pair: m_max must be nonnegative");

    SequencePair out;
    out.params = params;
    out.u_terms.reserve(m_max + 1);
    out.v_terms.reserve(m_max + 1);
    out.u_terms.push_back(0);
    out.v_terms.push_back(2);
    if (m_max >= 1) {
        out.u_terms.push_back(1);
        out.v_terms.push_back(params.p);
    }
    for (int m = 2; m <= m_max; ++m) {
        out.u_terms.push_back(checked_next(params.p, params.q, out.u_terms[m - 1],
                                           out.u_terms[m - 2], "U", m));
        out.v_terms.push_back(checked_next(params.p, params.q, out.v_terms[m - 1],
                                           out.v_terms[m - 2], "V", m));
    }
    return out;
}

std::complex<double> closed_form_u(const LucasParams& params, int m)
{
    if (m < 0)
        throw config_error("closed_form_u: m must be nonnegative");
    if (params.repeated_root()) {
        const double s = static_cast<double>(params.p) / 2.0;
        if (m == 0)
            return 0.0;
        return static_cast<double>(m) * std::pow(s, m - 1);
    }
    std::complex<double> sum = 0.0;
    for (int n = 0; n < m; ++n)
        sum += pow_int(params.root_a, n) * pow_int(params.root_b, m - n - 1);
    return sum;
}

std::complex<double> closed_form_v(const LucasParams& params, int m)
{
    if (m < 0)
        throw config_error("closed_form_v: m must be nonnegative");
    if (params.repeated_root()) {
        const double s = static_cast<double>(params.p) / 2.0;
        return 2.0 * std::pow(s, m);
    }
    return pow_int(params.root_a, m) + pow_int(params.root_b, m);
}

} // namespace nhlat
