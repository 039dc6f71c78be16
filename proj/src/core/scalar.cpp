#include "dq/scalar.hpp"

#include <stdexcept>

namespace dq {

Scalar &Scalar::operator/=(const Scalar &o)
{
    if (o.is_zero())
        throw std::domain_error("division by zero scalar");
    if (sgn(o.im) == 0) {
        re /= o.re;
        im /= o.re;
        return *this;
    }
    mpq_class n = o.re * o.re + o.im * o.im;
    Scalar c = o.conj();
    *this *= c;
    re /= n;
    im /= n;
    return *this;
}

Scalar Scalar::pow(int k) const
{
    if (k < 0)
        return Scalar(1) / pow(-k);
    Scalar r(1), b = *this;
    while (k) {
        if (k & 1)
            r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

std::string Scalar::str() const
{
    if (sgn(im) == 0)
        return re.get_str();
    if (sgn(re) == 0)
        return im.get_str() + "i";
    std::string s = re.get_str();
    if (sgn(im) > 0)
        s += "+";
    return s + im.get_str() + "i";
}

namespace {

mpq_class parse_rational(const std::string &s)
{
    if (s.empty())
        throw std::invalid_argument("empty rational");
    size_t k = 0;
    if (s[0] == '+' || s[0] == '-')
        k = 1;
    if (k == s.size())
        throw std::invalid_argument("bad rational '" + s + "'");
    int slash = 0;
    for (size_t j = k; j < s.size(); ++j) {
        if (s[j] == '/') {
            if (++slash > 1 || j == k || j + 1 == s.size())
                throw std::invalid_argument("bad rational '" + s + "'");
        } else if (s[j] < '0' || s[j] > '9')
            throw std::invalid_argument("bad rational '" + s + "'");
    }
    std::string t = s[0] == '+' ? s.substr(1) : s;
    mpq_class q;
    if (q.set_str(t, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

} // namespace

Scalar Scalar::parse(const std::string &s)
{
    if (s.empty())
        throw std::invalid_argument("empty scalar");
    if (s.back() != 'i')
        return Scalar(parse_rational(s));
    std::string body = s.substr(0, s.size() - 1);
    // split at the last sign that is not leading
    size_t cut = std::string::npos;
    for (size_t j = body.size(); j-- > 1;)
        if (body[j] == '+' || body[j] == '-') {
            cut = j;
            break;
        }
    if (cut == std::string::npos)
        return Scalar(mpq_class(0), parse_rational(body));
    return Scalar(parse_rational(body.substr(0, cut)), parse_rational(body.substr(cut)));
}

std::ostream &operator<<(std::ostream &os, const Scalar &s) { return os << s.str(); }

Scalar factorial(int n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), (unsigned long)n);
    return Scalar(mpq_class(f));
}

Scalar binomial(int n, int k)
{
    if (k < 0 || k > n)
        return Scalar(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), (unsigned long)n, (unsigned long)k);
    return Scalar(mpq_class(b));
}

} // namespace dq
