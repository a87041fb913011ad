#include "uev/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace uev {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string s, const std::string& whole) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s = s.substr(1);
    }
    if (!all_digits(s)) throw std::invalid_argument("not a rational: \"" + whole + "\"");
    mpz_class z(s, 10);
    return neg ? mpz_class(-z) : z;
}

}  // namespace

Q parse_rational(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty rational");

    auto slash = t.find('/');
    if (slash != std::string::npos) {
        mpz_class num = parse_integer(t.substr(0, slash), text);
        mpz_class den = parse_integer(t.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in \"" + text + "\"");
        Q q(num, den);
        q.canonicalize();
        return q;
    }
    auto dot = t.find('.');
    if (dot != std::string::npos) {
        std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || (!fp.empty() && !all_digits(fp)))
            throw std::invalid_argument("not a rational: \"" + text + "\"");
        mpz_class scale = 1;
        for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
        mpz_class num = mpz_class(ip, 10) * scale + (fp.empty() ? mpz_class(0) : mpz_class(fp, 10));
        Q q(neg ? mpz_class(-num) : num, scale);
        q.canonicalize();
        return q;
    }
    return Q(parse_integer(t, text));
}

std::string to_string(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Q abs(const Q& q) { return q < 0 ? Q(-q) : q; }

mpz_class floor_q(const Q& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

mpz_class ceil_q(const Q& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

mpz_class floor_plus_one(const Q& q) { return floor_q(q) + 1; }

Q simplest_between(const Q& lo, const Q& hi, bool hi_infinite) {
    if (!hi_infinite && !(lo < hi)) throw std::invalid_argument("empty interval");
    // Stern-Brocot descent on the open interval (lo, hi), restricted to lo >= 0
    // by shifting: callers here only need nonnegative bounds.
    if (lo < 0) {
        if (hi_infinite || hi > 0) return Q(0);
        Q r = simplest_between(-hi, -lo, false);
        return -r;
    }
    mpz_class ln = 0, ld = 1, rn = 1, rd = 0;  // left 0/1, right 1/0 (infinity)
    while (true) {
        Q mid(ln + rn, ld + rd);
        bool above_lo = mid > lo;
        bool below_hi = hi_infinite || mid < hi;
        if (above_lo && below_hi) return mid;
        if (!above_lo) {
            // step right as far as possible in one go
            ln += rn;
            ld += rd;
            while (Q(ln + rn, ld + rd) <= lo) { ln += rn; ld += rd; }
        } else {
            rn += ln;
            rd += ld;
            while (Q(ln + rn, ld + rd) >= hi) { rn += ln; rd += ld; }
        }
    }
}

}  // namespace uev
