#include "unifed/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "unifed/errors.hpp"

namespace unifed {

namespace {

// Crossover between the Taylor branch and the closed-form branch.
constexpr double kSeriesThreshold = 1e-2;

void require_finite(double x, const char* name) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(name) + " must be finite");
    }
}

}  // namespace

namespace detail {

double kappa_series(double theta) {
    const double t2 = theta * theta;
    return theta / 2 + t2 / 24 - t2 * t2 / 2880 + t2 * t2 * t2 / 181440;
}

double kappa_prime_series(double theta) {
    const double t2 = theta * theta;
    return 0.5 + theta / 12 - theta * t2 / 720 + theta * t2 * t2 / 30240;
}

double kappa_double_prime_series(double theta) {
    const double t2 = theta * theta;
    return 1.0 / 12 - t2 / 240 + t2 * t2 / 6048;
}

// The closed forms subtract nearly equal quantities as theta -> 0, losing
// about |log2 theta| bits; evaluating in long double keeps the loss below
// the double rounding floor throughout the closed-form branch.

double kappa_closed(double theta) {
    const long double t = theta < 0 ? -(long double)theta : (long double)theta;
    // log((e^t - 1)/t) = t - log t + log(1 - e^-t), overflow-free for t > 0
    const long double k = t - std::log(t) + std::log1p(-std::exp(-t));
    return theta > 0 ? (double)k : (double)(k - t);  // kappa(-t) = kappa(t) - t
}

double kappa_prime_closed(double theta) {
    const long double t = theta;
    return (double)(1.0L - 1.0L / t + 1.0L / std::expm1(t));
}

double kappa_double_prime_closed(double theta) {
    const long double t = theta;
    const long double s = 2.0L * std::sinh(t / 2.0L);
    return (double)(1.0L / (t * t) - 1.0L / (s * s));
}

}  // namespace detail

double kappa(double theta) {
    require_finite(theta, "theta");
    if (std::fabs(theta) < kSeriesThreshold) return detail::kappa_series(theta);
    return detail::kappa_closed(theta);
}

double kappa_prime(double theta) {
    require_finite(theta, "theta");
    const double mu = std::fabs(theta) < kSeriesThreshold
                          ? detail::kappa_prime_series(theta)
                          : detail::kappa_prime_closed(theta);
    // the mean lies strictly inside (0, 1) even where the closed form
    // rounds to an endpoint
    return std::clamp(mu, std::numeric_limits<double>::min(),
                      1.0 - std::numeric_limits<double>::epsilon() / 2);
}

double kappa_double_prime(double theta) {
    require_finite(theta, "theta");
    const double v = std::fabs(theta) < kSeriesThreshold
                         ? detail::kappa_double_prime_series(theta)
                         : detail::kappa_double_prime_closed(theta);
    return std::max(v, std::numeric_limits<double>::min());
}

double kappa_prime_inverse(double mu) {
    if (!std::isfinite(mu) || mu <= 0.0 || mu >= 1.0) {
        throw DomainError("mu must lie strictly inside (0, 1)");
    }
    double theta = 12.0 * (mu - 0.5);  // exact at mu = 1/2, first order nearby
    double f = kappa_prime(theta) - mu;
    if (f == 0.0) return theta;

    // grow a bracket [lo, hi] around the root by doubling steps
    double lo = theta;
    double hi = theta;
    double step = 1.0;
    if (f < 0.0) {
        do {
            lo = hi;
            hi += step;
            step *= 2;
        } while (kappa_prime(hi) < mu);
    } else {
        do {
            hi = lo;
            lo -= step;
            step *= 2;
        } while (kappa_prime(lo) > mu);
    }

    for (int iter = 0; iter < 100; ++iter) {
        f = kappa_prime(theta) - mu;
        if (std::fabs(f) <= 1e-12) break;
        (f < 0.0 ? lo : hi) = theta;
        const double newton = theta - f / kappa_double_prime(theta);
        const double next =
            (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
        if (next == theta) break;  // bracket exhausted at double resolution
        theta = next;
    }
    return theta;
}

double irwin_hall_naive(double y, int n) {
    if (n < 1) throw DomainError("n must be a positive integer");
    require_finite(y, "y");
    if (y < 0.0 || y > (double)n) return 0.0;
    double factorial = 1.0;  // (n - 1)!
    for (int i = 2; i < n; ++i) factorial *= i;
    const int k_max = (int)std::floor(y);
    double sum = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        const double term = binom.get_d() * std::pow(y - k, n - 1);
        sum += (k % 2 == 0) ? term : -term;
    }
    return sum / factorial;
}

Rational irwin_hall_exact(const Rational& y, int n, int cap) {
    if (n < 1) throw DomainError("n must be a positive integer");
    if (n > cap) {
        throw CapacityError("exact Irwin-Hall order " + std::to_string(n) +
                            " exceeds the configured cap " +
                            std::to_string(cap));
    }
    Rational point = y;
    point.canonicalize();  // two-argument mpq_class constructors skip this
    if (point < 0 || point > n) return Rational(0);

    mpz_class floor_y;
    mpz_fdiv_q(floor_y.get_mpz_t(), point.get_num_mpz_t(),
               point.get_den_mpz_t());
    const unsigned long k_max = floor_y.get_ui();

    Rational sum(0);
    for (unsigned long k = 0; k <= k_max; ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), n, k);
        const Rational base = point - Rational((long)k);
        Rational power;  // base^(n-1), canonical since base is
        mpz_pow_ui(power.get_num_mpz_t(), base.get_num_mpz_t(), n - 1);
        mpz_pow_ui(power.get_den_mpz_t(), base.get_den_mpz_t(), n - 1);
        const Rational term = Rational(binom) * power;
        if (k % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    mpz_class factorial;
    mpz_fac_ui(factorial.get_mpz_t(), (unsigned long)(n - 1));
    return sum / Rational(factorial);
}

namespace {

// Regularized lower incomplete gamma P(a, x) by power series; converges
// quickly for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued
// fraction; converges quickly for x > a + 1.
double gamma_q_continued_fraction(double a, double x) {
    const double floor_ = std::numeric_limits<double>::min() / 1e-30;
    double b = x + 1.0 - a;
    double c = 1.0 / floor_;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < floor_) d = floor_;
        c = b + an / c;
        if (std::fabs(c) < floor_) c = floor_;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) <= 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double chi_square_survival(double x, double df) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("x must be a finite nonnegative real");
    }
    if (!std::isfinite(df) || df <= 0.0) {
        throw DomainError("df must be a finite positive real");
    }
    if (x == 0.0) return 1.0;
    const double a = df / 2.0;
    const double z = x / 2.0;
    const double q = (x > df + 1.0) ? gamma_q_continued_fraction(a, z)
                                    : 1.0 - gamma_p_series(a, z);
    return std::clamp(q, 0.0, 1.0);
}

double normal_two_sided_p(double z) {
    require_finite(z, "z");
    return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

}  // namespace unifed
