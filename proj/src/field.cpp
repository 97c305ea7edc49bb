#include "detflop/field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace detflop {

namespace {

using Poly = std::vector<std::uint32_t>;  // dense, little-endian, over F_p

std::uint64_t pow_u64(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < e; ++i) r *= b;
  return r;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, b, m);
    b = mulmod_u64(b, b, m);
    e >>= 1;
  }
  return r;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const Poly& a) { return static_cast<int>(a.size()) - 1; }

// a mod b over F_p, b monic-normalized inside.
Poly poly_mod(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  if (b.empty()) throw Error("polynomial division by zero");
  std::uint64_t lead_inv = powmod_u64(b.back(), p - 2, p);
  while (deg(a) >= deg(b)) {
    std::uint64_t f = mulmod_u64(a.back(), lead_inv, p);
    int shift = deg(a) - deg(b);
    for (int i = 0; i <= deg(b); ++i) {
      std::uint64_t t = mulmod_u64(f, b[static_cast<std::size_t>(i)], p);
      std::uint64_t cur = a[static_cast<std::size_t>(i + shift)];
      a[static_cast<std::size_t>(i + shift)] = static_cast<std::uint32_t>((cur + p - t) % p);
    }
    trim(a);
  }
  return a;
}

bool poly_divides(const Poly& d, const Poly& f, std::uint32_t p) {
  Poly r = poly_mod(f, d, p);
  return r.empty();
}

// f (monic, degree k >= 2) irreducible over F_p: no monic factor of degree
// <= k/2. Trial division over all monic candidates; desk scale keeps this
// cheap and it is cached per (p, k).
bool poly_irreducible(const Poly& f, std::uint32_t p) {
  int kdeg = deg(f);
  for (int d = 1; d <= kdeg / 2; ++d) {
    std::uint64_t count = pow_u64(p, static_cast<std::uint32_t>(d));
    for (std::uint64_t code = 0; code < count; ++code) {
      Poly g(static_cast<std::size_t>(d) + 1, 0);
      std::uint64_t c = code;
      for (int i = 0; i < d; ++i) {
        g[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      g[static_cast<std::size_t>(d)] = 1;
      if (poly_divides(g, f, p)) return false;
    }
  }
  return true;
}

Poly lex_smallest_irreducible(std::uint32_t p, std::uint32_t k) {
  static std::map<std::pair<std::uint32_t, std::uint32_t>, Poly> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::uint64_t count = pow_u64(p, k);
  for (std::uint64_t code = 0; code < count; ++code) {
    Poly f(k + 1, 0);
    std::uint64_t c = code;
    for (std::uint32_t i = 0; i < k; ++i) {
      f[i] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    f[k] = 1;
    if (poly_irreducible(f, p)) {
      Poly low(f.begin(), f.begin() + k);
      cache[key] = low;
      return low;
    }
  }
  throw Error("no irreducible polynomial found");  // unreachable: they always exist
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  // Deterministic Miller-Rabin for n < 2^32 with bases 2, 7, 61.
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 7ULL, 61ULL}) {
    if (a % n == 0) continue;
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

FieldSpec FieldSpec::rationals() { return FieldSpec{}; }

FieldSpec FieldSpec::prime(std::uint32_t p) {
  if (!is_prime_u32(p)) throw Error("characteristic " + std::to_string(p) + " is not prime");
  FieldSpec s;
  s.kind = FieldKind::Prime;
  s.p = p;
  s.k = 1;
  return s;
}

FieldSpec FieldSpec::extension(std::uint32_t p, std::uint32_t k) {
  if (k == 1) return prime(p);
  if (!is_prime_u32(p)) throw Error("characteristic " + std::to_string(p) + " is not prime");
  if (k < 1 || k > 12) throw Error("extension degree out of range");
  FieldSpec s;
  s.kind = FieldKind::Extension;
  s.p = p;
  s.k = k;
  s.modulus = lex_smallest_irreducible(p, k);
  return s;
}

FieldSpec FieldSpec::extension(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus) {
  FieldSpec s = extension(p, k);
  if (k == 1) return s;
  if (modulus.size() != k) throw Error("modulus must list k low-order coefficients");
  Poly f(modulus.begin(), modulus.end());
  for (auto& c : f) c %= p;
  f.push_back(1);
  if (!poly_irreducible(f, p)) throw Error("modulus is reducible over F_p");
  s.modulus.assign(f.begin(), f.begin() + k);
  return s;
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)) {
  if (spec_.kind != FieldKind::Rationals && !is_prime_u32(spec_.p))
    throw Error("characteristic is not prime");
}

std::uint64_t Field::size() const {
  if (is_rationals()) return 0;
  return pow_u64(spec_.p, spec_.k);
}

FieldElem Field::zero() const {
  FieldElem e;
  if (!is_rationals()) e.c.assign(spec_.k, 0);
  return e;
}

FieldElem Field::one() const {
  FieldElem e;
  if (is_rationals()) {
    e.rat = 1;
  } else {
    e.c.assign(spec_.k, 0);
    e.c[0] = 1;
  }
  return e;
}

FieldElem Field::from_int(long long v) const {
  if (is_rationals()) {
    FieldElem e;
    e.rat = v;
    return e;
  }
  long long m = v % static_cast<long long>(spec_.p);
  if (m < 0) m += spec_.p;
  FieldElem e;
  e.c.assign(spec_.k, 0);
  e.c[0] = static_cast<std::uint32_t>(m);
  return e;
}

FieldElem Field::from_rat(const Rat& r) const {
  if (is_rationals()) {
    FieldElem e;
    e.rat = r;
    return e;
  }
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  Int p = spec_.p;
  Int nm = num % p;
  if (nm < 0) nm += p;
  Int dm = den % p;
  if (dm < 0) dm += p;
  if (dm == 0) throw Error("denominator vanishes in characteristic " + std::to_string(spec_.p));
  FieldElem n = from_int(static_cast<long long>(nm));
  FieldElem d = from_int(static_cast<long long>(dm));
  return div(n, d);
}

bool Field::is_zero(const FieldElem& a) const {
  if (is_rationals()) return a.rat == 0;
  return std::all_of(a.c.begin(), a.c.end(), [](std::uint32_t x) { return x == 0; });
}

FieldElem Field::add(const FieldElem& a, const FieldElem& b) const {
  FieldElem r;
  if (is_rationals()) {
    r.rat = a.rat + b.rat;
    return r;
  }
  r.c.resize(spec_.k);
  for (std::uint32_t i = 0; i < spec_.k; ++i)
    r.c[i] = (a.c[i] + b.c[i]) % spec_.p;
  return r;
}

FieldElem Field::sub(const FieldElem& a, const FieldElem& b) const {
  FieldElem r;
  if (is_rationals()) {
    r.rat = a.rat - b.rat;
    return r;
  }
  r.c.resize(spec_.k);
  for (std::uint32_t i = 0; i < spec_.k; ++i)
    r.c[i] = (a.c[i] + spec_.p - b.c[i]) % spec_.p;
  return r;
}

FieldElem Field::neg(const FieldElem& a) const { return sub(zero(), a); }

std::vector<std::uint32_t> Field::poly_mul_mod(const std::vector<std::uint32_t>& a,
                                               const std::vector<std::uint32_t>& b) const {
  const std::uint32_t p = spec_.p;
  const std::uint32_t k = spec_.k;
  std::vector<std::uint64_t> prod(2 * k - 1, 0);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (a[i] == 0) continue;
    for (std::uint32_t j = 0; j < k; ++j)
      prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p;
  }
  // Reduce by x^k = -modulus, highest power first.
  for (int d = static_cast<int>(2 * k - 2); d >= static_cast<int>(k); --d) {
    std::uint64_t coef = prod[static_cast<std::size_t>(d)];
    if (coef == 0) continue;
    prod[static_cast<std::size_t>(d)] = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
      std::size_t idx = static_cast<std::size_t>(d - static_cast<int>(k) + static_cast<int>(i));
      std::uint64_t t = coef * spec_.modulus[i] % p;
      prod[idx] = (prod[idx] + p - t) % p;
    }
  }
  std::vector<std::uint32_t> r(k);
  for (std::uint32_t i = 0; i < k; ++i) r[i] = static_cast<std::uint32_t>(prod[i]);
  return r;
}

FieldElem Field::mul(const FieldElem& a, const FieldElem& b) const {
  FieldElem r;
  if (is_rationals()) {
    r.rat = a.rat * b.rat;
    return r;
  }
  if (spec_.k == 1) {
    r.c.assign(1, static_cast<std::uint32_t>(
                      static_cast<std::uint64_t>(a.c[0]) * b.c[0] % spec_.p));
    return r;
  }
  r.c = poly_mul_mod(a.c, b.c);
  return r;
}

FieldElem Field::inv(const FieldElem& a) const {
  if (is_zero(a)) throw Error("division by zero");
  FieldElem r;
  if (is_rationals()) {
    r.rat = Rat(1) / a.rat;
    return r;
  }
  if (spec_.k == 1) {
    r.c.assign(1, static_cast<std::uint32_t>(powmod_u64(a.c[0], spec_.p - 2, spec_.p)));
    return r;
  }
  // q - 2 exponentiation; q = p^k fits in 64 bits at desk scale.
  return pow(a, size() - 2);
}

FieldElem Field::pow(FieldElem base, unsigned long long e) const {
  FieldElem r = one();
  while (e) {
    if (e & 1ULL) r = mul(r, base);
    base = mul(base, base);
    e >>= 1ULL;
  }
  return r;
}

FieldElem Field::elem_at(std::uint64_t index) const {
  if (is_rationals()) throw Error("cannot enumerate the rationals");
  FieldElem e;
  e.c.resize(spec_.k);
  for (std::uint32_t i = 0; i < spec_.k; ++i) {
    e.c[i] = static_cast<std::uint32_t>(index % spec_.p);
    index /= spec_.p;
  }
  if (index != 0) throw Error("element index out of range");
  return e;
}

std::uint64_t Field::index_of(const FieldElem& a) const {
  if (is_rationals()) throw Error("cannot index the rationals");
  std::uint64_t idx = 0;
  for (std::uint32_t i = spec_.k; i-- > 0;) idx = idx * spec_.p + a.c[i];
  return idx;
}

FieldElem Field::embed(const Field& sub, const FieldElem& a) const {
  if (sub.is_rationals() || is_rationals()) throw Error("embedding requires finite fields");
  if (sub.p() != p()) throw Error("embedding requires equal characteristic");
  if (k() % sub.k() != 0) throw Error("subfield degree does not divide");
  if (sub.k() == 1) return from_int(static_cast<long long>(a.c[0]));
  if (sub.spec() == spec()) return a;
  // Smallest-index root of the subfield modulus in this field.
  FieldElem root;
  bool found = false;
  const std::uint64_t q = size();
  for (std::uint64_t i = 0; i < q; ++i) {
    FieldElem x = elem_at(i);
    FieldElem acc = zero();
    FieldElem xp = one();
    for (std::uint32_t d = 0; d < sub.k(); ++d) {
      acc = add(acc, mul(from_int(sub.spec().modulus[d]), xp));
      xp = mul(xp, x);
    }
    acc = add(acc, xp);  // monic leading term x^{k_sub}
    if (is_zero(acc)) {
      root = x;
      found = true;
      break;
    }
  }
  if (!found) throw Error("subfield modulus has no root; embedding failed");
  FieldElem r = zero();
  FieldElem rp = one();
  for (std::uint32_t d = 0; d < sub.k(); ++d) {
    r = add(r, mul(from_int(a.c[d]), rp));
    rp = mul(rp, root);
  }
  return r;
}

std::string Field::to_string(const FieldElem& a) const {
  std::ostringstream os;
  if (is_rationals()) {
    os << a.rat;
    return os.str();
  }
  if (spec_.k == 1) {
    os << a.c[0];
    return os.str();
  }
  os << "[";
  for (std::uint32_t i = 0; i < spec_.k; ++i) {
    if (i) os << ",";
    os << a.c[i];
  }
  os << "]";
  return os.str();
}

std::vector<FieldElem> normalize_projective(const Field& F, std::vector<FieldElem> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!F.is_zero(v[i])) {
      FieldElem s = F.inv(v[i]);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = F.mul(v[j], s);
      return v;
    }
  }
  throw Error("cannot normalize the zero vector");
}

}  // namespace detflop
