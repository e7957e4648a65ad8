#pragma once
// Small dense matrices over either exact cyclotomic or complex double scalars.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qcorr/cyclotomic.hpp"

namespace qcorr {

using Complex = std::complex<double>;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<CyclotomicNumber> {
    static constexpr bool exact = true;
    static CyclotomicNumber zero() { return CyclotomicNumber(); }
    static CyclotomicNumber one() { return CyclotomicNumber(1L); }
    static CyclotomicNumber conj(const CyclotomicNumber& v) { return v.conjugate(); }
    static bool is_zero(const CyclotomicNumber& v, double) { return v.is_zero(); }
    static Complex to_complex(const CyclotomicNumber& v) { return v.to_complex(); }
};

template <>
struct ScalarTraits<Complex> {
    static constexpr bool exact = false;
    static Complex zero() { return {0.0, 0.0}; }
    static Complex one() { return {1.0, 0.0}; }
    static Complex conj(const Complex& v) { return std::conj(v); }
    static bool is_zero(const Complex& v, double tol) { return std::abs(v) <= tol; }
    static Complex to_complex(const Complex& v) { return v; }
};

template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows_(r), cols_(c), data_(r * c, ScalarTraits<T>::zero()) {}

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = ScalarTraits<T>::one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix adjoint() const {
        DenseMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = ScalarTraits<T>::conj((*this)(i, j));
        return m;
    }

    DenseMatrix transpose() const {
        DenseMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    T trace() const {
        T t = ScalarTraits<T>::zero();
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    bool is_zero(double tol = 0.0) const {
        for (const auto& v : data_)
            if (!ScalarTraits<T>::is_zero(v, tol)) return false;
        return true;
    }

    friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
        check_same(a, b);
        DenseMatrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
        return r;
    }
    friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
        check_same(a, b);
        DenseMatrix r = a;
        for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
        return r;
    }
    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix dimension mismatch");
        DenseMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (ScalarTraits<T>::is_zero(aik, 0.0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const T& bkj = b(k, j);
                    if (ScalarTraits<T>::is_zero(bkj, 0.0)) continue;
                    r(i, j) += aik * bkj;
                }
            }
        return r;
    }
    friend DenseMatrix operator*(const T& s, const DenseMatrix& a) {
        DenseMatrix r = a;
        for (auto& v : r.data_) v = s * v;
        return r;
    }
    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::vector<T> apply(const std::vector<T>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector dimension mismatch");
        std::vector<T> out(rows_, ScalarTraits<T>::zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                const T& a = (*this)(i, j);
                if (ScalarTraits<T>::is_zero(a, 0.0) || ScalarTraits<T>::is_zero(v[j], 0.0)) continue;
                out[i] += a * v[j];
            }
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;

    static void check_same(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix dimension mismatch");
    }
};

using ExactMatrix = DenseMatrix<CyclotomicNumber>;
using FloatMatrix = DenseMatrix<Complex>;

template <class T>
T inner(const std::vector<T>& u, const std::vector<T>& v) {
    if (u.size() != v.size()) throw std::invalid_argument("vector dimension mismatch");
    T s = ScalarTraits<T>::zero();
    for (std::size_t i = 0; i < u.size(); ++i) s += ScalarTraits<T>::conj(u[i]) * v[i];
    return s;
}

inline double norm(const std::vector<Complex>& v) {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

inline std::vector<Complex> operator-(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline std::vector<Complex> operator+(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline std::vector<Complex> operator*(Complex s, const std::vector<Complex>& a) {
    std::vector<Complex> r = a;
    for (auto& c : r) c *= s;
    return r;
}

inline FloatMatrix to_float(const ExactMatrix& m) {
    FloatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).to_complex();
    return r;
}

inline std::vector<Complex> to_float(const std::vector<CyclotomicNumber>& v) {
    std::vector<Complex> r;
    r.reserve(v.size());
    for (const auto& c : v) r.push_back(c.to_complex());
    return r;
}

inline FloatMatrix to_float(const FloatMatrix& m) { return m; }
inline std::vector<Complex> to_float(const std::vector<Complex>& v) { return v; }

// Largest entry modulus of a - b.
inline double max_abs_diff(const FloatMatrix& a, const FloatMatrix& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

}  // namespace qcorr
