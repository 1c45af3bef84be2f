#include "loconst/polymod.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "loconst/padic.hpp"

namespace loconst {

long mod_p(long x, int p) {
  x %= p;
  return x < 0 ? x + p : x;
}

namespace {

long pow_mod(long base, long exp, int p) {
  base = mod_p(base, p);
  long result = 1;
  while (exp > 0) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return result;
}

int factorial_mod_p(int j, int p) {
  if (j >= p) return 0;
  long f = 1;
  for (int k = 2; k <= j; ++k) f = f * k % p;
  return static_cast<int>(f);
}

}  // namespace

int inv_mod_p(long x, int p) {
  x = mod_p(x, p);
  if (x == 0) throw std::invalid_argument("inverse of zero mod p");
  return static_cast<int>(pow_mod(x, p - 2, p));
}

int binom_mod_p(long n, long k, int p) {
  if (k < 0 || n < 0 || k > n) return 0;
  long result = 1;
  while (n > 0 || k > 0) {
    const long nd = n % p, kd = k % p;
    if (kd > nd) return 0;
    long num = 1, den = 1;
    for (long i = 0; i < kd; ++i) {
      num = num * (nd - i) % p;
      den = den * (i + 1) % p;
    }
    result = result * num % p * inv_mod_p(den, p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<int>(result);
}

int primitive_root(int p) {
  std::vector<int> factors;
  int n = p - 1;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      factors.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) factors.push_back(n);
  for (int g = 2; g < p; ++g) {
    bool ok = true;
    for (int q : factors)
      if (pow_mod(g, (p - 1) / q, p) == 1) ok = false;
    if (ok) return g;
  }
  return 1;  // p = 2
}

// ----------------------------------------------------------------- HomPoly

HomPoly::HomPoly(int p, int r) : p_(p), r_(r), c_(r >= 0 ? r + 1 : 0, 0) {
  if (!is_prime(p)) throw std::invalid_argument("HomPoly: p must be prime");
  if (r < 0) throw std::invalid_argument("HomPoly: negative degree");
}

HomPoly::HomPoly(int p, int r, std::vector<long> coeffs) : HomPoly(p, r) {
  if (static_cast<int>(coeffs.size()) != r + 1)
    throw std::invalid_argument("HomPoly: need r+1 coefficients");
  for (int i = 0; i <= r; ++i) c_[i] = static_cast<int>(mod_p(coeffs[i], p));
}

HomPoly HomPoly::monomial(int p, int r, int i, long c) {
  HomPoly f(p, r);
  f.set(i, c);
  return f;
}

HomPoly HomPoly::theta(int p) {
  HomPoly t(p, p + 1);
  t.set(1, 1);
  t.set(p, -1);
  return t;
}

void HomPoly::set(int i, long c) {
  if (i < 0 || i > r_) throw std::out_of_range("HomPoly::set: index outside 0..r");
  c_[i] = static_cast<int>(mod_p(c, p_));
}

bool HomPoly::is_zero() const {
  for (int x : c_)
    if (x) return false;
  return true;
}

HomPoly HomPoly::operator+(const HomPoly& o) const {
  if (p_ != o.p_ || r_ != o.r_) throw std::invalid_argument("HomPoly: mismatched degree");
  HomPoly out(p_, r_);
  for (int i = 0; i <= r_; ++i) out.c_[i] = (c_[i] + o.c_[i]) % p_;
  return out;
}

HomPoly HomPoly::operator-(const HomPoly& o) const { return *this + o.scaled(-1); }

HomPoly HomPoly::operator*(const HomPoly& o) const {
  if (p_ != o.p_) throw std::invalid_argument("HomPoly: mismatched prime");
  HomPoly out(p_, r_ + o.r_);
  std::vector<long> acc(r_ + o.r_ + 1, 0);
  for (int i = 0; i <= r_; ++i) {
    if (!c_[i]) continue;
    for (int j = 0; j <= o.r_; ++j) acc[i + j] = (acc[i + j] + long(c_[i]) * o.c_[j]) % p_;
  }
  for (size_t k = 0; k < acc.size(); ++k) out.c_[k] = static_cast<int>(acc[k]);
  return out;
}

HomPoly HomPoly::scaled(long c) const {
  HomPoly out(p_, r_);
  const long cc = mod_p(c, p_);
  for (int i = 0; i <= r_; ++i) out.c_[i] = static_cast<int>(c_[i] * cc % p_);
  return out;
}

std::string HomPoly::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= r_; ++i) {
    if (!c_[i]) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i] << "*X^" << (r_ - i) << "*Y^" << i;
  }
  if (first) os << "0";
  return os.str();
}

HomPoly theta_power(int p, int k) {
  HomPoly acc = HomPoly::monomial(p, 0, 0, 1);
  const HomPoly t = HomPoly::theta(p);
  for (int i = 0; i < k; ++i) acc = acc * t;
  return acc;
}

// ------------------------------------------------------------ theta order

std::optional<HomPoly> divide_by_theta(const HomPoly& F) {
  const int p = F.p(), r = F.r(), rq = r - p - 1;
  if (rq < 0) return std::nullopt;
  // theta * Q has coefficient q_{i-1} - q_{i-p} at Y^i.
  std::vector<long> q(rq + 1, 0);
  auto qat = [&](int k) -> long { return (k >= 0 && k <= rq) ? q[k] : 0; };
  for (int i = 1; i <= rq + 1; ++i) q[i - 1] = mod_p(F.coeff(i) + qat(i - p), p);
  for (int i = 0; i <= r; ++i)
    if (mod_p(qat(i - 1) - qat(i - p), p) != F.coeff(i)) return std::nullopt;
  return HomPoly(p, rq, q);
}

int theta_order(const HomPoly& F) {
  if (F.is_zero()) throw std::invalid_argument("theta_order of the zero polynomial");
  int m = 0;
  HomPoly cur = F;
  while (auto q = divide_by_theta(cur)) {
    cur = std::move(*q);
    ++m;
  }
  return m;
}

bool divconds_check(const HomPoly& F, int m, int a) {
  const int p = F.p(), r = F.r();
  if (m < 0) throw std::invalid_argument("divconds_check: m must be >= 0");
  const long cls = mod_p(a, p - 1);
  for (int i = 0; i <= r; ++i)
    if (F.coeff(i) && mod_p(i, p - 1) != cls)
      throw std::invalid_argument("divconds_check: support not confined to one class mod p-1");
  for (int i = 0; i <= r; ++i)
    if (F.coeff(i) && (i < m || i > r - m)) return false;
  for (int j = 0; j < m; ++j) {
    const long jf = factorial_mod_p(j, p);
    long sum = 0;
    for (int i = 0; i <= r; ++i)
      if (F.coeff(i)) sum = (sum + jf * binom_mod_p(i, j, p) % p * F.coeff(i)) % p;
    if (sum) return false;
  }
  return true;
}

HomPoly make_Fm(int p, long r, int b, int m) {
  if (r < b || mod_p(r - b, p - 1) != 0)
    throw std::invalid_argument("make_Fm: need r >= b and r = b mod (p-1)");
  if (m < 0 || m > b) throw std::invalid_argument("make_Fm: need 0 <= m <= b");
  HomPoly f(p, static_cast<int>(r));
  f.set(static_cast<int>(r - m), 1);
  f.set(b - m, f.coeff(b - m) - 1);
  return f;
}

HomPoly make_Hm(int p, long r, int b, int m) {
  if (m < 0 || b <= 2 * m) throw std::invalid_argument("make_Hm: need b > 2m >= 0");
  if (r <= b || mod_p(r - b, p - 1) != 0 || (r - b) % p != 0)
    throw std::invalid_argument("make_Hm: need r = b mod (p-1) with v_p(r-b) >= 1");
  const long s = r - long(m) * (p + 1);
  const long xexp = r - b - long(p) * m + m;
  if (s < 0 || xexp < 0) throw std::invalid_argument("make_Hm: r too small for m");
  HomPoly tail(p, static_cast<int>(s));
  tail.set(static_cast<int>(s), 1);
  tail.set(b - 2 * m, tail.coeff(b - 2 * m) - 1);
  HomPoly correction = theta_power(p, m) * tail;
  if (m % 2) correction = correction.scaled(-1);
  return make_Fm(p, r, b, m) - correction;
}

// ------------------------------------------------------------ Gamma action

GammaMat GammaMat::make(int p, long a, long b, long c, long d) {
  GammaMat g{p, int(mod_p(a, p)), int(mod_p(b, p)), int(mod_p(c, p)), int(mod_p(d, p))};
  if (g.det() == 0) throw std::invalid_argument("GammaMat: singular matrix");
  return g;
}

int GammaMat::det() const { return static_cast<int>(mod_p(long(a) * d - long(b) * c, p)); }

GammaMat GammaMat::operator*(const GammaMat& o) const {
  return make(p, long(a) * o.a + long(b) * o.c, long(a) * o.b + long(b) * o.d,
              long(c) * o.a + long(d) * o.c, long(c) * o.b + long(d) * o.d);
}

HomPoly gamma_act(const GammaMat& g, const HomPoly& F, int twist) {
  const int p = F.p(), r = F.r();
  if (g.p != p) throw std::invalid_argument("gamma_act: mismatched prime");
  // Horner: H_k = H_{k-1} * (aX + cY) + c_k (bX + dY)^k.
  std::vector<long> h{F.coeff(0)};
  std::vector<long> ypow{1};
  for (int k = 1; k <= r; ++k) {
    std::vector<long> nh(k + 1, 0), ny(k + 1, 0);
    for (int i = 0; i < k; ++i) {
      nh[i] = (nh[i] + g.a * h[i]) % p;
      nh[i + 1] = (nh[i + 1] + g.c * h[i]) % p;
      ny[i] = (ny[i] + g.b * ypow[i]) % p;
      ny[i + 1] = (ny[i + 1] + g.d * ypow[i]) % p;
    }
    if (const long ck = F.coeff(k))
      for (int i = 0; i <= k; ++i) nh[i] = (nh[i] + ck * ny[i]) % p;
    h.swap(nh);
    ypow.swap(ny);
  }
  HomPoly out(p, r, h);
  if (twist != 0) {
    const long dt = twist > 0 ? pow_mod(g.det(), twist, p) : pow_mod(inv_mod_p(g.det(), p), -long(twist), p);
    out = out.scaled(dt);
  }
  return out;
}

HomPoly quotient_coords(const HomPoly& F, int m) {
  HomPoly cur = F;
  for (int k = 0; k < m; ++k) {
    auto q = divide_by_theta(cur);
    if (!q) throw std::invalid_argument("quotient_coords: theta^m does not divide F");
    cur = std::move(*q);
  }
  return cur;
}

// ---------------------------------------------------------- ThetaQuotient

ThetaQuotient::ThetaQuotient(int p, long s) : p_(p), s_(s) {
  if (s < 0) throw std::invalid_argument("ThetaQuotient: negative degree");
  if (s <= p) {
    for (long i = 0; i <= s; ++i) basis_.push_back(i);
  } else {
    for (long i = 0; i < p; ++i) basis_.push_back(i);
    basis_.push_back(s);
  }
}

// X Y^p = X^p Y mod theta, so X^(s-i) Y^i with 0 < i < s moves to index i-(p-1).
int ThetaQuotient::slot_of(long i) const {
  if (s_ <= p_ || i == 0) return static_cast<int>(i);
  if (i == s_) return p_;
  return static_cast<int>((i - 1) % (p_ - 1) + 1);
}

std::vector<int> ThetaQuotient::coords(const HomPoly& F) const {
  if (F.r() != s_ || F.p() != p_) throw std::invalid_argument("ThetaQuotient: degree mismatch");
  std::vector<int> v(dim(), 0);
  for (int i = 0; i <= F.r(); ++i)
    if (F.coeff(i)) v[slot_of(i)] = static_cast<int>((v[slot_of(i)] + F.coeff(i)) % p_);
  return v;
}

void ThetaQuotient::add_monomial_image(const GammaMat& g, long i, int coef,
                                       std::vector<int>& out) const {
  // (aX + cY)^(s-i) (bX + dY)^i
  const long n = s_ - i;
  auto powp = [this](long base, long e) { return e == 0 ? 1L : pow_mod(base, e, p_); };
  std::vector<std::pair<long, long>> left, right;
  for (long u = 0; u <= n; ++u) {
    if ((g.a == 0 && u < n) || (g.c == 0 && u > 0)) continue;
    const long bc = binom_mod_p(n, u, p_);
    if (!bc) continue;
    left.emplace_back(u, bc * powp(g.a, n - u) % p_ * powp(g.c, u) % p_);
  }
  for (long w = 0; w <= i; ++w) {
    if ((g.b == 0 && w < i) || (g.d == 0 && w > 0)) continue;
    const long bc = binom_mod_p(i, w, p_);
    if (!bc) continue;
    right.emplace_back(w, bc * powp(g.b, i - w) % p_ * powp(g.d, w) % p_);
  }
  for (auto [u, cu] : left)
    for (auto [w, cw] : right) {
      const int slot = slot_of(u + w);
      out[slot] = static_cast<int>((out[slot] + coef * cu % p_ * cw) % p_);
    }
}

std::vector<int> ThetaQuotient::act(const GammaMat& g, const std::vector<int>& v) const {
  std::vector<int> out(dim(), 0);
  for (int k = 0; k < dim(); ++k)
    if (v[k]) add_monomial_image(g, basis_[k], v[k], out);
  return out;
}

// ---------------------------------------------------------------- spans

bool FpEchelon::insert(std::vector<int> v) {
  if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("FpEchelon: length mismatch");
  for (auto& x : v) x = static_cast<int>(mod_p(x, p_));
  for (size_t k = 0; k < rows_.size(); ++k) {
    const int pc = pivots_[k];
    if (const long f = v[pc])
      for (int j = 0; j < n_; ++j) v[j] = static_cast<int>(mod_p(v[j] - f * rows_[k][j], p_));
  }
  int pivot = -1;
  for (int j = 0; j < n_; ++j)
    if (v[j]) {
      pivot = j;
      break;
    }
  if (pivot < 0) return false;
  const long inv = inv_mod_p(v[pivot], p_);
  for (auto& x : v) x = static_cast<int>(x * inv % p_);
  rows_.push_back(std::move(v));
  pivots_.push_back(pivot);
  return true;
}

int rank_mod_p(std::vector<std::vector<int>> rows, int p) {
  if (rows.empty()) return 0;
  FpEchelon ech(p, static_cast<int>(rows.front().size()));
  for (auto& r : rows) ech.insert(std::move(r));
  return ech.rank();
}

int gamma_span_dim(const std::vector<HomPoly>& vectors, int p) {
  if (vectors.empty()) return 0;
  const long s = vectors.front().r();
  for (const auto& v : vectors)
    if (v.r() != s || v.p() != p) throw std::invalid_argument("gamma_span_dim: mixed degrees");
  const ThetaQuotient q(p, s);
  const std::vector<GammaMat> gens{GammaMat::make(p, 1, 1, 0, 1),
                                   GammaMat::make(p, primitive_root(p), 0, 0, 1),
                                   GammaMat::make(p, 0, 1, 1, 0)};
  FpEchelon span(p, q.dim());
  std::deque<std::vector<int>> pending;
  for (const auto& v : vectors) {
    auto c = q.coords(v);
    if (span.insert(c)) pending.push_back(std::move(c));
  }
  while (!pending.empty()) {
    const auto w = std::move(pending.front());
    pending.pop_front();
    for (const auto& g : gens) {
      auto u = q.act(g, w);
      if (span.insert(u)) pending.push_back(std::move(u));
    }
  }
  return span.rank();
}

int filtration_dim(int p, long r, int m) {
  const long s = r - long(m) * (p + 1);
  if (s < 0) return 0;
  const HomPoly tm = theta_power(p, m);
  std::vector<std::vector<int>> rows;
  for (long k = 0; k <= s; ++k) rows.push_back((tm * HomPoly::monomial(p, int(s), int(k))).coeffs());
  return rank_mod_p(std::move(rows), p);
}

}  // namespace loconst
