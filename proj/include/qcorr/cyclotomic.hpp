#pragma once
// Exact arithmetic in cyclotomic fields Q(w_N), w_N = exp(2 pi i / N).
// Values are stored in the power basis {w_N^k : 0 <= k < phi(N)} as integer
// numerators over one common positive denominator.

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qcorr {

using BigInt = mpz_class;
using Rational = mpq_class;

inline bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline long long mod_floor(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

inline bool is_primitive_root(long long r, long long p) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (r < 1 || r >= p) throw std::invalid_argument("need 1 <= r < p");
    long long x = 1;
    for (long long order = 1; order <= p - 1; ++order) {
        x = x * r % p;
        if (x == 1) return order == p - 1;
    }
    return false;
}

// n-th prime q > r such that r is a primitive root mod q.
inline long long prime_sequence(long long r, int n) {
    if (r != 2 && r != 3 && r != 5) throw std::invalid_argument("r must be 2, 3 or 5");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    int found = 0;
    for (long long q = r + 1;; ++q) {
        if (!is_prime(q)) continue;
        if (is_primitive_root(r, q) && ++found == n) return q;
    }
}

inline unsigned euler_phi(unsigned n) {
    unsigned result = n;
    for (unsigned d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            while (n % d == 0) n /= d;
            result -= result / d;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

using IntPolynomial = std::vector<BigInt>;  // ascending coefficients

namespace detail {

inline IntPolynomial poly_exact_div(IntPolynomial num, const IntPolynomial& den) {
    // den must be monic
    const std::size_t dd = den.size() - 1;
    if (num.size() < den.size()) return {0};
    IntPolynomial q(num.size() - dd, 0);
    for (std::size_t i = num.size(); i-- > dd;) {
        BigInt c = num[i];
        if (c == 0) continue;
        q[i - dd] = c;
        for (std::size_t k = 0; k <= dd; ++k) num[i - dd + k] -= c * den[k];
    }
    for (std::size_t k = 0; k < dd; ++k)
        if (num[k] != 0) throw std::logic_error("inexact polynomial division");
    return q;
}

struct PolyCache {
    std::mutex mu;
    std::map<unsigned, std::shared_ptr<const IntPolynomial>> table;
};

inline PolyCache& poly_cache() {
    static PolyCache cache;
    return cache;
}

}  // namespace detail

// Phi_N from x^N - 1 = prod_{d | N} Phi_d.
inline std::shared_ptr<const IntPolynomial> cyclotomic_polynomial_ptr(unsigned N) {
    if (N == 0) throw std::invalid_argument("cyclotomic_polynomial: N must be >= 1");
    auto& cache = detail::poly_cache();
    {
        std::lock_guard<std::mutex> lock(cache.mu);
        auto it = cache.table.find(N);
        if (it != cache.table.end()) return it->second;
    }
    IntPolynomial p(N + 1, 0);
    p[0] = -1;
    p[N] = 1;
    for (unsigned d = 1; d < N; ++d)
        if (N % d == 0) p = detail::poly_exact_div(p, *cyclotomic_polynomial_ptr(d));
    auto ptr = std::make_shared<const IntPolynomial>(std::move(p));
    std::lock_guard<std::mutex> lock(cache.mu);
    return cache.table.emplace(N, ptr).first->second;
}

inline IntPolynomial cyclotomic_polynomial(unsigned N) { return *cyclotomic_polynomial_ptr(N); }

class CyclotomicNumber {
public:
    CyclotomicNumber() : n_(1), num_(1, 0), den_(1) {}
    CyclotomicNumber(long v) : n_(1), num_(1, v), den_(1) {}  // NOLINT: implicit from integer
    CyclotomicNumber(const Rational& q) : n_(1), num_(1, q.get_num()), den_(q.get_den()) {}  // NOLINT

    // Arbitrary polynomial in w_N (any length); reduced on construction.
    static CyclotomicNumber from_polynomial(unsigned N, std::vector<BigInt> poly, BigInt den = 1) {
        CyclotomicNumber r;
        r.n_ = N;
        r.num_ = reduce(N, std::move(poly));
        r.den_ = std::move(den);
        r.normalize();
        return r;
    }

    static CyclotomicNumber from_coeffs(unsigned N, const std::vector<Rational>& coeffs) {
        BigInt den = 1;
        for (const auto& q : coeffs) den = lcm_big(den, q.get_den());
        std::vector<BigInt> poly;
        poly.reserve(coeffs.size());
        for (const auto& q : coeffs) poly.push_back(q.get_num() * (den / q.get_den()));
        return from_polynomial(N, std::move(poly), den);
    }

    unsigned conductor() const { return n_; }
    const std::vector<BigInt>& numerators() const { return num_; }
    const BigInt& denominator() const { return den_; }

    std::vector<Rational> coeffs() const {
        std::vector<Rational> out;
        out.reserve(num_.size());
        for (const auto& c : num_) {
            Rational q(c, den_);
            q.canonicalize();
            out.push_back(q);
        }
        return out;
    }

    bool is_zero() const {
        for (const auto& c : num_)
            if (c != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t k = 1; k < num_.size(); ++k)
            if (num_[k] != 0) return false;
        return true;
    }

    // Value as a rational; only valid when the element lies in Q.
    Rational rational_value() const {
        if (!is_rational()) throw std::domain_error("cyclotomic value is not rational");
        Rational q(num_[0], den_);
        q.canonicalize();
        return q;
    }

    // Re-express in Q(w_M) for a multiple M of the conductor.
    CyclotomicNumber lift(unsigned M) const {
        if (M == n_) return *this;
        if (M % n_ != 0) throw std::invalid_argument("lift target must be a multiple of the conductor");
        const unsigned step = M / n_;
        std::vector<BigInt> poly((num_.size() - 1) * step + 1, 0);
        for (std::size_t k = 0; k < num_.size(); ++k) poly[k * step] = num_[k];
        return from_polynomial(M, std::move(poly), den_);
    }

    CyclotomicNumber conjugate() const {
        std::vector<BigInt> poly(n_, 0);
        for (std::size_t k = 0; k < num_.size(); ++k) poly[(n_ - k) % n_] += num_[k];
        return from_polynomial(n_, std::move(poly), den_);
    }

    std::complex<double> to_complex() const {
        long double re = 0, im = 0;
        const long double two_pi = 6.283185307179586476925286766559L;
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0) continue;
            Rational q(num_[k], den_);
            q.canonicalize();
            long double c = q.get_d();
            long double ang = two_pi * static_cast<long double>(k) / n_;
            re += c * std::cos(ang);
            im += c * std::sin(ang);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    CyclotomicNumber operator-() const {
        CyclotomicNumber r = *this;
        for (auto& c : r.num_) c = -c;
        return r;
    }

    friend CyclotomicNumber operator+(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        return combine(a, b, false);
    }
    friend CyclotomicNumber operator-(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        return combine(a, b, true);
    }
    friend CyclotomicNumber operator*(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.is_zero() || b.is_zero()) return CyclotomicNumber();
        if (b.n_ == 1) return a.scaled(b.num_[0], b.den_);
        if (a.n_ == 1) return b.scaled(a.num_[0], a.den_);
        const unsigned M = std::lcm(a.n_, b.n_);
        if (a.n_ != M || b.n_ != M) return a.lift(M) * b.lift(M);
        std::vector<BigInt> prod(a.num_.size() + b.num_.size() - 1, 0);
        for (std::size_t i = 0; i < a.num_.size(); ++i) {
            if (a.num_[i] == 0) continue;
            for (std::size_t j = 0; j < b.num_.size(); ++j) {
                if (b.num_[j] == 0) continue;
                mpz_addmul(prod[i + j].get_mpz_t(), a.num_[i].get_mpz_t(), b.num_[j].get_mpz_t());
            }
        }
        return from_polynomial(M, std::move(prod), a.den_ * b.den_);
    }
    friend CyclotomicNumber operator/(const CyclotomicNumber& a, const Rational& q) {
        if (q == 0) throw std::domain_error("division by zero");
        return a.scaled(q.get_den(), q.get_num());
    }

    CyclotomicNumber& operator+=(const CyclotomicNumber& b) { return *this = *this + b; }
    CyclotomicNumber& operator-=(const CyclotomicNumber& b) { return *this = *this - b; }
    CyclotomicNumber& operator*=(const CyclotomicNumber& b) { return *this = *this * b; }

    friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
        if (a.n_ == b.n_) return a.den_ == b.den_ && a.num_ == b.num_;
        const unsigned M = std::lcm(a.n_, b.n_);
        return a.lift(M) == b.lift(M);
    }
    friend bool operator!=(const CyclotomicNumber& a, const CyclotomicNumber& b) { return !(a == b); }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < num_.size(); ++k) {
            if (num_[k] == 0) continue;
            Rational q(num_[k], den_);
            q.canonicalize();
            if (!first) os << " + ";
            first = false;
            os << "(" << q.get_str() << ")";
            if (k > 0) os << "*w" << n_ << "^" << k;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    unsigned n_;
    std::vector<BigInt> num_;
    BigInt den_;

    static BigInt lcm_big(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return r;
    }

    static std::vector<BigInt> reduce(unsigned N, std::vector<BigInt> poly) {
        const auto phi_ptr = cyclotomic_polynomial_ptr(N);
        const IntPolynomial& phi = *phi_ptr;
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = poly.size(); i-- > deg;) {
            if (poly[i] == 0) continue;
            const BigInt c = poly[i];
            for (std::size_t k = 0; k < deg; ++k) {
                if (phi[k] == 0) continue;
                mpz_submul(poly[i - deg + k].get_mpz_t(), c.get_mpz_t(), phi[k].get_mpz_t());
            }
            poly[i] = 0;
        }
        poly.resize(deg, 0);
        return poly;
    }

    void normalize() {
        if (den_ < 0) {
            den_ = -den_;
            for (auto& c : num_) c = -c;
        }
        BigInt g = den_;
        for (const auto& c : num_) {
            if (g == 1) break;
            if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        }
        if (is_zero()) {
            den_ = 1;
            return;
        }
        if (g != 1) {
            for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
        }
    }

    // this * (mul / div)
    CyclotomicNumber scaled(const BigInt& mul, const BigInt& div) const {
        CyclotomicNumber r = *this;
        for (auto& c : r.num_) c *= mul;
        r.den_ *= div;
        r.normalize();
        return r;
    }

    static CyclotomicNumber combine(const CyclotomicNumber& a, const CyclotomicNumber& b, bool subtract) {
        const unsigned M = std::lcm(a.n_, b.n_);
        if (a.n_ != M || b.n_ != M) return combine(a.lift(M), b.lift(M), subtract);
        CyclotomicNumber r;
        r.n_ = M;
        r.den_ = lcm_big(a.den_, b.den_);
        const BigInt fa = r.den_ / a.den_, fb = r.den_ / b.den_;
        r.num_.assign(a.num_.size(), 0);
        for (std::size_t k = 0; k < r.num_.size(); ++k) {
            r.num_[k] = a.num_[k] * fa;
            if (subtract)
                r.num_[k] -= b.num_[k] * fb;
            else
                r.num_[k] += b.num_[k] * fb;
        }
        r.normalize();
        return r;
    }
};

inline std::ostream& operator<<(std::ostream& os, const CyclotomicNumber& c) { return os << c.to_string(); }

inline CyclotomicNumber root_of_unity(unsigned N, long long k) {
    if (N == 0) throw std::invalid_argument("root_of_unity: N must be >= 1");
    std::vector<BigInt> poly(N, 0);
    poly[static_cast<std::size_t>(mod_floor(k, N))] = 1;
    return CyclotomicNumber::from_polynomial(N, std::move(poly));
}

inline CyclotomicNumber conjugate(const CyclotomicNumber& a) { return a.conjugate(); }

inline std::complex<double> to_float(const CyclotomicNumber& a) { return a.to_complex(); }

// cos(2 pi k / N) = (w_N^k + w_N^-k)/2
inline CyclotomicNumber cos_2pi(long long k, unsigned N) {
    return (root_of_unity(N, k) + root_of_unity(N, -k)) / Rational(2);
}

// sin(2 pi k / N) = (w_N^k - w_N^-k) * w_4^3 / 2
inline CyclotomicNumber sin_2pi(long long k, unsigned N) {
    return (root_of_unity(N, k) - root_of_unity(N, -k)) * root_of_unity(4, 3) / Rational(2);
}

inline void require_odd_prime(long long p, const char* where) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument(std::string(where) + ": p must be an odd prime");
}

// cos(2 j pi / p)
inline CyclotomicNumber cos_value(long long j, unsigned p) {
    require_odd_prime(p, "cos_value");
    return cos_2pi(j, p);
}

// sin((2j+1) pi / p), conductor 4p
inline CyclotomicNumber sin_value(long long j, unsigned p) {
    require_odd_prime(p, "sin_value");
    return sin_2pi(2 * j + 1, 2 * p).lift(4 * p);
}

// 17 significant digits, enough to round-trip a double.
inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline nlohmann::json bigint_to_json(const BigInt& v) {
    if (v.fits_slong_p()) return static_cast<long long>(v.get_si());
    return v.get_str();
}

inline BigInt bigint_from_json(const nlohmann::json& j) {
    if (j.is_number_integer()) return BigInt(std::to_string(j.get<long long>()));
    if (j.is_string()) return BigInt(j.get<std::string>());
    throw std::invalid_argument("expected integer or integer string");
}

inline void to_json(nlohmann::json& j, const CyclotomicNumber& c) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& q : c.coeffs()) coeffs.push_back({bigint_to_json(q.get_num()), bigint_to_json(q.get_den())});
    j = {{"conductor", c.conductor()}, {"coeffs", coeffs}};
}

inline void from_json(const nlohmann::json& j, CyclotomicNumber& c) {
    const unsigned N = j.at("conductor").get<unsigned>();
    if (N == 0) throw std::invalid_argument("conductor must be >= 1");
    std::vector<Rational> coeffs;
    for (const auto& e : j.at("coeffs")) {
        if (!e.is_array() || e.size() != 2) throw std::invalid_argument("coefficient must be [num, den]");
        BigInt den = bigint_from_json(e[1]);
        if (den == 0) throw std::invalid_argument("zero denominator");
        Rational q(bigint_from_json(e[0]), den);
        q.canonicalize();
        coeffs.push_back(q);
    }
    if (coeffs.size() != euler_phi(N)) throw std::invalid_argument("coefficient count must equal phi(conductor)");
    c = CyclotomicNumber::from_coeffs(N, coeffs);
}

}  // namespace qcorr
