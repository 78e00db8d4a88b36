#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "countdown/rng.hpp"

namespace countdown {

using Elem = std::uint8_t;

/// F_q for q prime (q <= 251) or q in {4, 8, 9, 16, 25, 27}. Elements are the
/// integers 0..q-1; for extension fields the base-p digits of an element are
/// the coefficients of a polynomial reduced modulo a fixed irreducible.
class FqField {
public:
    enum class Kind { Prime, Extension };

    /// Throws DomainError for unsupported q. Extension tables are checked
    /// against the field axioms before being returned.
    static FqField make(long q);
    static bool supported(long q);

    long q() const { return q_; }
    long characteristic() const { return p_; }
    long degree() const { return degree_; }
    Kind kind() const { return kind_; }
    /// The defining polynomial, e.g. "t^2+t+1", or "" for prime fields.
    const std::string& modulus() const { return tables_->modulus; }

    Elem add(Elem a, Elem b) const { return tables_->add[idx(a, b)]; }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const { return tables_->mul[idx(a, b)]; }
    Elem neg(Elem a) const { return tables_->neg[a]; }
    /// Multiplicative inverse of a nonzero element.
    Elem inv(Elem a) const;

    /// dst[i] += c * src[i] through the dispatched row kernels.
    void axpy(Elem* dst, const Elem* src, Elem c, std::size_t len) const;
    void scale(Elem* row, Elem c, std::size_t len) const;

    friend bool operator==(const FqField& a, const FqField& b) { return a.q_ == b.q_; }

private:
    struct Tables {
        std::vector<Elem> add, mul, neg, inv;
        std::string modulus;
    };

    FqField(long q, long p, long degree, Kind kind, std::shared_ptr<const Tables> tables)
        : q_(q), p_(p), degree_(degree), kind_(kind), tables_(std::move(tables)) {}
    std::size_t idx(Elem a, Elem b) const { return static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) + b; }

    long q_;
    long p_;
    long degree_;
    Kind kind_;
    std::shared_ptr<const Tables> tables_;
};

class FqMatrix {
public:
    FqMatrix(FqField field, long rows, long cols);

    const FqField& field() const { return field_; }
    long rows() const { return rows_; }
    long cols() const { return cols_; }
    Elem at(long r, long c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    void set(long r, long c, Elem v);
    Elem* row(long r) { return data_.data() + r * cols_; }
    const Elem* row(long r) const { return data_.data() + r * cols_; }
    std::vector<Elem>& data() { return data_; }
    const std::vector<Elem>& data() const { return data_; }

    static FqMatrix identity(FqField field, long n);
    FqMatrix transpose() const;
    /// Gaussian elimination on a copy.
    long rank() const;
    /// One line per row, entries as base-36 digits ("0110" style for small q).
    std::string str() const;

private:
    FqField field_;
    long rows_;
    long cols_;
    std::vector<Elem> data_;
};

/// In-place rank of a row-major rows x cols block (destroys its contents).
long rankInPlace(const FqField& field, Elem* data, long rows, long cols);

FqMatrix sampleMatrix(const FqField& field, long rows, long cols, Rng& rng);

/// Number of rows x cols matrices over F_q of rank r.
mpz_class rankCountExact(long q, long rows, long cols, long r);

inline constexpr double kDefaultEnumerationCap = 67108864.0; // 2^26

/// counts[r] = number of matrices of rank r, by visiting every matrix.
/// Throws BudgetError when q^{rows*cols} exceeds cap.
std::vector<mpz_class> enumerateRankCounts(const FqField& field, long rows, long cols,
                                           double cap = kDefaultEnumerationCap, int threads = 1);

/// Y_0 = n, Y_k = n - dim span(v_1..v_k) for uniform v_i in F_q^n.
std::vector<long> corankSpanProcess(const FqField& field, long n, long steps, Rng& rng);

} // namespace countdown
