#include "netforge/ratmap.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "netforge/errors.hpp"

namespace netforge {

RationalMap validate_map(RationalMap r, double coprime_tol) {
  r.num = poly_trim(r.num);
  r.den = poly_trim(r.den);
  if (r.den.empty()) throw input_error("rational map: zero denominator");
  if (r.num.empty()) throw input_error("rational map: zero numerator");
  if (r.degree() < 1) throw input_error("rational map: degree must be >= 1");
  double res = relative_resultant(r.num, r.den);
  if (res < coprime_tol) {
    std::ostringstream os;
    os << "rational map: numerator and denominator share a root "
          "(relative resultant "
       << res << ")";
    throw input_error(os.str());
  }
  return r;
}

SpherePoint rm_eval(const RationalMap& r, const SpherePoint& z) {
  const int dp = poly_degree(r.num), dq = poly_degree(r.den);
  const int d = std::max(dp, dq);
  if (!z.inf && std::abs(z.value) <= 1.0) {
    cplx n = poly_eval(r.num, z.value);
    cplx q = poly_eval(r.den, z.value);
    double nn = std::abs(n), qq = std::abs(q);
    if (qq == 0.0 || (nn > 0 && qq < nn * 1e-280)) return SpherePoint::infinity();
    if (nn == 0.0 && qq == 0.0) return SpherePoint::infinity();
    return sphere_of(n / q);
  }
  // |z| > 1 or infinity: evaluate reversed polynomials at u = 1/z.
  // r(z) = z^(dp-dq) * pr(u)/qr(u) with pr, qr degree-padded reversals.
  cplx u = z.inf ? cplx(0) : 1.0 / z.value;
  Poly pr(d + 1, cplx(0)), qr(d + 1, cplx(0));
  for (int k = 0; k <= dp; ++k) pr[d - k] = r.num[k];
  for (int k = 0; k <= dq; ++k) qr[d - k] = r.den[k];
  cplx n = poly_eval(pr, u);
  cplx q = poly_eval(qr, u);
  double nn = std::abs(n), qq = std::abs(q);
  if (qq == 0.0 || (nn > 0 && qq < nn * 1e-280)) return SpherePoint::infinity();
  return sphere_of(n / q);
}

cplx rm_deriv(const RationalMap& r, cplx z) {
  cplx p = poly_eval(r.num, z), q = poly_eval(r.den, z);
  cplx dp = poly_eval(poly_derivative(r.num), z);
  cplx dq = poly_eval(poly_derivative(r.den), z);
  return (dp * q - p * dq) / (q * q);
}

namespace {

// Newton polish of a root of s(z) = 0 (used on fibers and critical points).
cplx newton_polish(const Poly& s, const Poly& ds, cplx z, int steps = 5) {
  for (int i = 0; i < steps; ++i) {
    cplx dv = poly_eval(ds, z);
    if (std::abs(dv) == 0.0) break;
    cplx step = poly_eval(s, z) / dv;
    if (std::abs(step) > 0.3 * (1.0 + std::abs(z))) break;
    z -= step;
  }
  return z;
}

}  // namespace

CriticalData critical_data(const RationalMap& r) {
  const int d = r.degree();
  const int expected = 2 * d - 2;
  Poly w = poly_sub(poly_mul(poly_derivative(r.num), r.den),
                    poly_mul(r.num, poly_derivative(r.den)));
  w = poly_trim(w, 1e-12);
  CriticalData cd;
  int finite_mult = 0;
  if (poly_degree(w) >= 1) {
    Poly dw = poly_derivative(w);
    auto clusters = poly_roots(w);
    for (auto& c : clusters) {
      cplx z = c.multiplicity == 1 ? newton_polish(w, dw, c.center) : c.center;
      cd.points.push_back({SpherePoint(z), c.multiplicity});
      finite_mult += c.multiplicity;
    }
  }
  if (finite_mult > expected)
    throw numerical_error("critical_data: multiplicity bookkeeping failed");
  if (finite_mult < expected)
    cd.points.push_back({SpherePoint::infinity(), expected - finite_mult});

  // Values, deduplicated at chordal tolerance 1e-8.
  for (auto& [pt, mult] : cd.points) {
    SpherePoint v = rm_eval(r, pt);
    int idx = -1;
    for (size_t i = 0; i < cd.values.size(); ++i)
      if (chordal(cd.values[i], v) < 1e-8) {
        idx = static_cast<int>(i);
        break;
      }
    if (idx < 0) {
      idx = static_cast<int>(cd.values.size());
      cd.values.push_back(v);
    }
    cd.point_to_value.push_back(idx);
  }
  return cd;
}

std::vector<std::pair<SpherePoint, int>> fiber(const RationalMap& r,
                                               const SpherePoint& w) {
  const int d = r.degree();
  Poly s;
  if (w.inf) {
    s = r.den;
  } else {
    s = poly_sub(r.num, poly_scale(r.den, w.value));
  }
  s = poly_trim(s, 1e-12);
  std::vector<std::pair<SpherePoint, int>> out;
  int got = 0;
  if (poly_degree(s) >= 1) {
    Poly ds = poly_derivative(s);
    for (auto& c : poly_roots(s)) {
      cplx z = c.multiplicity == 1 ? newton_polish(s, ds, c.center) : c.center;
      out.push_back({SpherePoint(z), c.multiplicity});
      got += c.multiplicity;
    }
  }
  if (got < d) out.push_back({SpherePoint::infinity(), d - got});
  return out;
}

RationalMap compose_mobius(const Mobius& M, const RationalMap& r) {
  RationalMap out;
  out.num = poly_add(poly_scale(r.num, M.a), poly_scale(r.den, M.b));
  out.den = poly_add(poly_scale(r.num, M.c), poly_scale(r.den, M.d));
  return validate_map(out);
}

std::pair<RationalMap, Mobius> mobius_normalize(const RationalMap& r) {
  CriticalData cd = critical_data(r);
  bool ok = true;
  for (auto& v : cd.values)
    if (v.inf || std::abs(v.value) > 2.0) ok = false;
  if (ok) return {r, Mobius::identity()};

  Mobius M = Mobius::identity();
  bool has_inf = false;
  for (auto& v : cd.values)
    if (v.inf) has_inf = true;
  std::vector<SpherePoint> vals = cd.values;
  if (has_inf) {
    // Pull infinity to a finite point: pole at the sphere point farthest
    // from every critical value (coarse deterministic candidate set).
    std::vector<SpherePoint> cands;
    for (double x : {0.0, 1.0, -1.0, 0.5, -0.5, 2.0, -2.0})
      for (double y : {0.0, 1.0, -1.0, 0.5, -0.5})
        cands.push_back(cplx(x, y));
    double best = -1;
    cplx pole = 0;
    for (auto& c : cands) {
      double dmin = 4;
      for (auto& v : vals) dmin = std::min(dmin, chordal(c, v));
      if (dmin > best) {
        best = dmin;
        pole = c.value;
      }
    }
    M = Mobius::inversion_about(pole);
    std::vector<SpherePoint> moved;
    for (auto& v : vals) moved.push_back(M(v));
    vals = moved;
  }
  // All finite now; center and scale into the radius-1.2 disk.
  cplx centroid = 0;
  for (auto& v : vals) centroid += v.value;
  centroid /= double(vals.size());
  double rad = 0;
  for (auto& v : vals) rad = std::max(rad, std::abs(v.value - centroid));
  cplx scale = (rad > 0) ? cplx(1.2 / rad) : cplx(1.0);
  M = M.then(Mobius::affine(scale, -scale * centroid));
  return {compose_mobius(M, r), M};
}

// ---------------------------------------------------------------------------
// Shorthand parser. Grammar (implicit multiplication allowed):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/')? unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' integer)?
//   atom   := number | 'i' | 'z' | '(' expr ')'
namespace {

struct RatFunc {
  Poly num{cplx(1)};
  Poly den{cplx(1)};
};

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
  return {poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
          poly_mul(a.den, b.den)};
}
RatFunc rf_neg(const RatFunc& a) { return {poly_scale(a.num, cplx(-1)), a.den}; }
RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
  return {poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
}
RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
  if (poly_trim(b.num).empty()) throw input_error("map parser: division by zero");
  return {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw input_error("map parser: trailing input at '" + s_.substr(pos_) + "'");
    return r;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc acc = term();
    for (;;) {
      if (eat('+')) acc = rf_add(acc, term());
      else if (eat('-')) acc = rf_add(acc, rf_neg(term()));
      else return acc;
    }
  }

  bool atom_ahead() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    char c = s_[pos_];
    return c == '(' || c == 'z' || c == 'i' ||
           std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  RatFunc term() {
    RatFunc acc = unary();
    for (;;) {
      if (eat('*')) acc = rf_mul(acc, unary());
      else if (eat('/')) acc = rf_div(acc, unary());
      else if (atom_ahead()) acc = rf_mul(acc, unary());  // implicit product
      else return acc;
    }
  }

  RatFunc unary() {
    if (eat('-')) return rf_neg(unary());
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (eat('^')) {
      skip_ws();
      bool neg = eat('-');
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
      if (pos_ == start) throw input_error("map parser: expected integer exponent");
      int e = std::stoi(s_.substr(start, pos_ - start));
      RatFunc acc{Poly{cplx(1)}, Poly{cplx(1)}};
      for (int k = 0; k < e; ++k) acc = rf_mul(acc, base);
      if (neg) acc = rf_div(RatFunc{}, acc);
      return acc;
    }
    return base;
  }

  RatFunc atom() {
    skip_ws();
    if (pos_ >= s_.size()) throw input_error("map parser: unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!eat(')')) throw input_error("map parser: missing ')'");
      return r;
    }
    if (c == 'z') {
      ++pos_;
      return {Poly{cplx(0), cplx(1)}, Poly{cplx(1)}};
    }
    if (c == 'i') {
      ++pos_;
      return {Poly{cplx(0, 1)}, Poly{cplx(1)}};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
              s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E' ||
              ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > start &&
               (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
        ++pos_;
      double v = std::stod(s_.substr(start, pos_ - start));
      return {Poly{cplx(v)}, Poly{cplx(1)}};
    }
    throw input_error(std::string("map parser: unexpected character '") + c + "'");
  }

  const std::string& s_;
  size_t pos_ = 0;
};

}  // namespace

RationalMap parse_map(const std::string& text) {
  RatFunc rf = Parser(text).parse();
  // Cancel common factors the arithmetic may have produced (e.g. z * 1/z).
  Poly n = poly_trim(rf.num), d = poly_trim(rf.den);
  if (d.empty()) throw input_error("map parser: denominator vanished");
  if (relative_resultant(n, d) < 1e-10 && poly_degree(d) >= 1) {
    // Divide out shared roots found numerically.
    auto droots = poly_roots(d);
    for (auto& c : droots) {
      for (int k = 0; k < c.multiplicity; ++k) {
        if (std::abs(poly_eval(n, c.center)) <
            1e-9 * (1.0 + std::abs(c.center))) {
          // Synthetic division of both by (z - center).
          auto divide = [&](Poly& p) {
            Poly q(std::max<size_t>(p.size(), 1) - 1, cplx(0));
            cplx carry = 0;
            for (int j = poly_degree(p); j >= 1; --j) {
              carry = p[j] + carry * c.center;
              q[j - 1] = carry;
            }
            p = q;
          };
          divide(n);
          divide(d);
          n = poly_trim(n);
          d = poly_trim(d);
        }
      }
    }
  }
  return validate_map(RationalMap{n, d});
}

}  // namespace netforge
