#pragma once
// Formal power series in the deformation parameter, truncated at order N (inclusive).

#include "dq/coeff.hpp"

#include <vector>

namespace dq {

template <class T> class NuSeries {
  public:
    NuSeries() = default;
    NuSeries(int N, const T &zero) : c_(N + 1, zero) {}
    explicit NuSeries(std::vector<T> c) : c_(std::move(c)) {}

    int order() const { return (int)c_.size() - 1; }
    T &operator[](int r) { return c_.at(r); }
    const T &operator[](int r) const { return c_.at(r); }
    const std::vector<T> &coeffs() const { return c_; }

    NuSeries &operator+=(const NuSeries &o)
    {
        check(o);
        for (size_t r = 0; r < c_.size(); ++r)
            c_[r] += o.c_[r];
        return *this;
    }
    NuSeries &operator-=(const NuSeries &o)
    {
        check(o);
        for (size_t r = 0; r < c_.size(); ++r)
            c_[r] -= o.c_[r];
        return *this;
    }
    friend NuSeries operator+(NuSeries a, const NuSeries &b) { return a += b; }
    friend NuSeries operator-(NuSeries a, const NuSeries &b) { return a -= b; }
    bool operator==(const NuSeries &o) const { return c_ == o.c_; }
    bool operator!=(const NuSeries &o) const { return !(c_ == o.c_); }

    // Cauchy product cut at N with a payload product
    template <class Mul> NuSeries cauchy(const NuSeries &o, Mul mul, const T &zero) const
    {
        check(o);
        NuSeries out(order(), zero);
        for (int a = 0; a <= order(); ++a)
            for (int b = 0; a + b <= order(); ++b)
                out.c_[a + b] += mul(c_[a], o.c_[b]);
        return out;
    }

    NuSeries truncated(int M, const T &zero) const
    {
        NuSeries out(M, zero);
        for (int r = 0; r <= M && r <= order(); ++r)
            out.c_[r] = c_[r];
        return out;
    }

  private:
    void check(const NuSeries &o) const
    {
        if (o.c_.size() != c_.size())
            throw AlgebraError("series order mismatch");
    }
    std::vector<T> c_;
};

using ScalarSeries = NuSeries<Scalar>;
using FnSeries = NuSeries<CoeffFn>;

inline FnSeries series_mul_truncate(const FnSeries &a, const FnSeries &b)
{
    if (a.order() != b.order())
        throw AlgebraError("series order mismatch");
    return a.cauchy(b, [](const CoeffFn &x, const CoeffFn &y) { return x * y; }, CoeffFn(a[0].universe()));
}

inline ScalarSeries scalar_series_mul(const ScalarSeries &a, const ScalarSeries &b)
{
    return a.cauchy(b, [](const Scalar &x, const Scalar &y) { return x * y; }, Scalar(0));
}

inline FnSeries constant_series(const CoeffFn &f, int N)
{
    FnSeries s(N, CoeffFn(f.universe()));
    s[0] = f;
    return s;
}

} // namespace dq
