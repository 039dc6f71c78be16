#pragma once
// Gaussian rationals a + b i with a, b exact (GMP) fractions.

#include <gmpxx.h>
#include <string>
#include <ostream>

namespace dq {

class Scalar {
  public:
    mpq_class re, im;

    Scalar() : re(0), im(0) {}
    Scalar(long v) : re(v), im(0) {}
    Scalar(int v) : re(v), im(0) {}
    Scalar(mpq_class r) : re(std::move(r)), im(0) { re.canonicalize(); }
    Scalar(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i))
    {
        re.canonicalize();
        im.canonicalize();
    }
    static Scalar frac(long n, long d) { return Scalar(mpq_class(n, d)); }
    static Scalar I() { return Scalar(mpq_class(0), mpq_class(1)); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar &operator+=(const Scalar &o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    Scalar &operator-=(const Scalar &o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    Scalar &operator*=(const Scalar &o)
    {
        if (sgn(im) == 0 && sgn(o.im) == 0) {
            re *= o.re;
            return *this;
        }
        mpq_class r = re * o.re - im * o.im;
        mpq_class i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    Scalar &operator/=(const Scalar &o);

    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
    friend bool operator==(const Scalar &a, const Scalar &b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }

    Scalar conj() const { return Scalar(re, -im); }
    Scalar pow(int k) const;

    // "3/4", "-1/2i", "1/3+2i"
    std::string str() const;
    static Scalar parse(const std::string &s);
};

std::ostream &operator<<(std::ostream &os, const Scalar &s);

Scalar factorial(int n);
Scalar binomial(int n, int k);

} // namespace dq
