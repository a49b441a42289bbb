#include "nhlat/sequences.hpp"

#include "nhlat/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace nhlat;

namespace {

// Independent oracle: evaluate U_m and V_m by the explicit root sums in exact
// integer arithmetic where the roots are integers, or via high-tolerance
// floating sums otherwise. Used to cross-check the recurrence generator.
std::complex<double> brute_force_u(const LucasParams& p, int m)
{
    std::complex<double> sum = 0.0;
    for (int n = 0; n < m; ++n) {
        std::complex<double> term = 1.0;
        for (int k = 0; k < n; ++k)
            term *= p.root_a;
        for (int k = 0; k < m - n - 1; ++k)
            term *= p.root_b;
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("lucas_params basic identities")
{
    for (long long p = -5; p <= 5; ++p) {
        for (long long q = -5; q <= 5; ++q) {
            const LucasParams lp = lucas_params(p, q);
            CHECK(lp.discriminant == p * p - 4 * q);
            const double tol = 1e-12 * std::max<double>({1.0, std::abs(static_cast<double>(p)),
                                                         std::abs(static_cast<double>(q))});
            CHECK(std::abs(lp.root_a + lp.root_b - static_cast<double>(p)) <= tol);
            CHECK(std::abs(lp.root_a * lp.root_b - static_cast<double>(q)) <= tol);
        }
    }
}

TEST_CASE("fibonacci and lucas numbers")
{
    const auto pair = lucas_pair(lucas_params(1, -1), 9);
    const std::vector<long long> fib{0, 1, 1, 2, 3, 5, 8, 13, 21, 34};
    const std::vector<long long> luc{2, 1, 3, 4, 7, 11, 18, 29, 47, 76};
    for (size_t m = 0; m < fib.size(); ++m) {
        CHECK(pair.u_terms[m] == Int128(fib[m]));
        CHECK(pair.v_terms[m] == Int128(luc[m]));
    }
}

TEST_CASE("degenerate pair P=2 Q=1 gives U_m = m, V_m = 2")
{
    const auto pair = lucas_pair(lucas_params(2, 1), 100);
    for (int m = 0; m <= 100; ++m) {
        CHECK(pair.u_terms[static_cast<size_t>(m)] == Int128(m));
        CHECK(pair.v_terms[static_cast<size_t>(m)] == Int128(2));
    }
}

TEST_CASE("P=3 Q=2 gives U_m = 2^m - 1")
{
    const auto pair = lucas_pair(lucas_params(3, 2), 4);
    const std::vector<long long> expect{0, 1, 3, 7, 15};
    for (size_t m = 0; m < expect.size(); ++m)
        CHECK(pair.u_terms[m] == Int128(expect[m]));
}

TEST_CASE("closed forms match pinned values")
{
    CHECK(std::abs(closed_form_u(lucas_params(1, -1), 6) - 8.0) <= 1e-9);
    CHECK(std::abs(closed_form_v(lucas_params(1, -1), 5) - 11.0) <= 1e-9);

    // repeated-root branch evaluates exactly on integer s
    CHECK(closed_form_u(lucas_params(2, 1), 7) == std::complex<double>(7.0, 0.0));
    CHECK(closed_form_v(lucas_params(2, 1), 13) == std::complex<double>(2.0, 0.0));
    CHECK(closed_form_v(lucas_params(4, 4), 3) == std::complex<double>(16.0, 0.0));

    // alternating cancellation, a = 1, b = -1 (oracle: brute-force sum)
    const LucasParams p0 = lucas_params(0, -1);
    CHECK(std::abs(brute_force_u(p0, 4)) <= 1e-12);
    CHECK(std::abs(closed_form_u(p0, 4)) <= 1e-12);

    CHECK(std::abs(closed_form_u(lucas_params(1, -1), 0)) == 0.0);
}

TEST_CASE("closed form vs exact recurrence over the parameter grid")
{
    for (long long p = -5; p <= 5; ++p) {
        for (long long q = -5; q <= 5; ++q) {
            const LucasParams lp = lucas_params(p, q);
            const auto pair = lucas_pair(lp, 20);
            for (int m = 0; m <= 20; ++m) {
                const double u_exact = static_cast<double>(pair.u_terms[static_cast<size_t>(m)]);
                const double v_exact = static_cast<double>(pair.v_terms[static_cast<size_t>(m)]);
                const std::complex<double> u = closed_form_u(lp, m);
                const std::complex<double> v = closed_form_v(lp, m);
                CHECK(std::abs(u - u_exact) <= 1e-6 * std::max(1.0, std::abs(u_exact)));
                CHECK(std::abs(v - v_exact) <= 1e-6 * std::max(1.0, std::abs(v_exact)));
            }
        }
    }
}

TEST_CASE("recurrence closure and cross identity V^2 - D U^2 = 4 Q^m")
{
    for (long long p = -5; p <= 5; ++p) {
        for (long long q = -5; q <= 5; ++q) {
            const LucasParams lp = lucas_params(p, q);
            const auto pair = lucas_pair(lp, 20);
            for (int m = 2; m <= 20; ++m) {
                CHECK(pair.u_terms[static_cast<size_t>(m)] ==
                      Int128(p) * pair.u_terms[static_cast<size_t>(m - 1)] -
                          Int128(q) * pair.u_terms[static_cast<size_t>(m - 2)]);
                CHECK(pair.v_terms[static_cast<size_t>(m)] ==
                      Int128(p) * pair.v_terms[static_cast<size_t>(m - 1)] -
                          Int128(q) * pair.v_terms[static_cast<size_t>(m - 2)]);
            }
            Int128 q_pow = 1;
            for (int m = 0; m <= 20; ++m) {
                const Int128 u = pair.u_terms[static_cast<size_t>(m)];
                const Int128 v = pair.v_terms[static_cast<size_t>(m)];
                CHECK(v * v - Int128(lp.discriminant) * u * u == Int128(4) * q_pow);
                q_pow *= Int128(q);
            }
        }
    }
}

TEST_CASE("repeated-root closed form is exact on integers")
{
    for (const auto& [p, q] : std::vector<std::pair<long long, long long>>{{2, 1}, {4, 4}, {-2, 1}}) {
        const LucasParams lp = lucas_params(p, q);
        REQUIRE(lp.repeated_root());
        const auto pair = lucas_pair(lp, 12);
        for (int m = 0; m <= 12; ++m) {
            CHECK(closed_form_u(lp, m).real() ==
                  static_cast<double>(pair.u_terms[static_cast<size_t>(m)]));
            CHECK(closed_form_v(lp, m).real() ==
                  static_cast<double>(pair.v_terms[static_cast<size_t>(m)]));
        }
    }
}

TEST_CASE("overflow raises and names the failing index")
{
    const LucasParams lp = lucas_params(5, -5);
    CHECK_THROWS_AS(lucas_pair(lp, 200), std::overflow_error);
    try {
        lucas_pair(lp, 200);
    } catch (const std::overflow_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("overflow") != std::string::npos);
        CHECK(msg.find('_') != std::string::npos); // names U_k or V_k
    }
}

TEST_CASE("lucas_pair rejects negative m_max")
{
    CHECK_THROWS_AS(lucas_pair(lucas_params(1, -1), -1), config_error);
}

TEST_CASE("int128 printing")
{
    CHECK(to_string(Int128(0)) == "0");
    CHECK(to_string(Int128(-42)) == "-42");
    Int128 big = 1;
    for (int k = 0; k < 21; ++k)
        big *= 10;
    CHECK(to_string(big) == "1000000000000000000000");
}
