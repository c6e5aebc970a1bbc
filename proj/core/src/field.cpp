#include "pmds/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>

#include "pmds/error.hpp"

namespace pmds {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::DegreeZero: return "DegreeZero";
    case ErrorCode::FieldTooLarge: return "FieldTooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::MixedFields: return "MixedFields";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::AmbientMismatch: return "AmbientMismatch";
    case ErrorCode::NotAHyperplane: return "NotAHyperplane";
    case ErrorCode::DependentAnchors: return "DependentAnchors";
    case ErrorCode::BadLastPoint: return "BadLastPoint";
    case ErrorCode::NotEnoughField: return "NotEnoughField";
    case ErrorCode::LineInHyperplane: return "LineInHyperplane";
    case ErrorCode::CurveInHyperplane: return "CurveInHyperplane";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::BlockTooSmall: return "BlockTooSmall";
    case ErrorCode::FieldTooSmall: return "FieldTooSmall";
    case ErrorCode::DegenerateSpan: return "DegenerateSpan";
    case ErrorCode::PolicyUnderfillsLine: return "PolicyUnderfillsLine";
    case ErrorCode::NoFreePoint: return "NoFreePoint";
    case ErrorCode::PointOffArrangement: return "PointOffArrangement";
    case ErrorCode::ParamsInfeasible: return "ParamsInfeasible";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::LineUnderflow: return "LineUnderflow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

using Poly = std::vector<std::uint32_t>;  // coefficients low to high, over F_p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    const std::int64_t quotient = r / new_r;
    t = std::exchange(new_t, t - quotient * new_t);
    r = std::exchange(new_r, r - quotient * new_r);
  }
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

// Remainder of a modulo a nonzero polynomial b.
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = inv_mod(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t factor = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - factor) * b[i]) % p);
    }
    trim(a);
  }
  return a;
}

bool poly_divisible(const Poly& a, const Poly& b, std::uint32_t p) { return poly_mod(a, b, p).empty(); }

bool is_irreducible(const Poly& f, std::uint32_t p) {
  const std::size_t deg = f.size() - 1;
  for (std::size_t d = 1; d <= deg / 2; ++d) {
    // Every monic polynomial of degree d.
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      Poly g(d + 1, 0);
      std::uint64_t rest = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(rest % p);
        rest /= p;
      }
      g[d] = 1;
      if (poly_divisible(f, g, p)) return false;
    }
  }
  return true;
}

Poly find_modulus(std::uint32_t p, unsigned e) {
  if (e == 1) return {0, 1};
  std::uint64_t count = 1;
  for (unsigned i = 0; i < e; ++i) count *= p;
  // Lexicographic order with c_0 as the most significant position.
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    Poly f(e + 1, 0);
    std::uint64_t rest = idx;
    for (unsigned j = e; j-- > 0;) {
      f[j] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    f[e] = 1;
    if (f[0] == 0) continue;
    if (is_irreducible(f, p)) return f;
  }
  throw Error(ErrorCode::InvalidArgument, "no irreducible polynomial found");  // unreachable
}

}  // namespace

namespace detail {

struct FieldImpl {
  std::uint32_t p = 2;
  unsigned e = 1;
  std::uint32_t q = 2;
  Poly modulus;
  std::vector<std::uint32_t> radix;  // p^i
  std::vector<std::uint32_t> log;    // log[0] unused
  std::vector<std::uint32_t> exp;    // length 2(q-1)

  Poly unpack(std::uint32_t v) const {
    Poly c(e, 0);
    for (unsigned i = 0; i < e; ++i) {
      c[i] = v % p;
      v /= p;
    }
    return c;
  }

  std::uint32_t pack(const Poly& c) const {
    std::uint32_t v = 0;
    for (std::size_t i = std::min<std::size_t>(c.size(), e); i-- > 0;) v = v * p + c[i];
    return v;
  }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
    if (e == 1) {
      const std::uint32_t s = a + b;
      return s >= p ? s - p : s;
    }
    if (p == 2) return a ^ b;
    std::uint32_t out = 0;
    for (unsigned i = 0; i < e; ++i) {
      const std::uint32_t da = a % p, db = b % p;
      a /= p;
      b /= p;
      std::uint32_t d = da + db;
      if (d >= p) d -= p;
      out += d * radix[i];
    }
    return out;
  }

  std::uint32_t neg(std::uint32_t a) const {
    if (e == 1) return a == 0 ? 0 : p - a;
    if (p == 2) return a;
    std::uint32_t out = 0;
    for (unsigned i = 0; i < e; ++i) {
      const std::uint32_t d = a % p;
      a /= p;
      out += (d == 0 ? 0 : p - d) * radix[i];
    }
    return out;
  }

  std::uint32_t poly_mul(std::uint32_t a, std::uint32_t b) const {
    const Poly ca = unpack(a), cb = unpack(b);
    Poly prod(2 * e - 1, 0);
    for (unsigned i = 0; i < e; ++i) {
      if (ca[i] == 0) continue;
      for (unsigned j = 0; j < e; ++j) {
        prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{ca[i]} * cb[j]) % p);
      }
    }
    return pack(poly_mod(std::move(prod), modulus, p));
  }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    if (e == 1) return static_cast<std::uint32_t>(std::uint64_t{a} * b % p);
    if (a == 0 || b == 0) return 0;
    if (!log.empty()) return exp[log[a] + log[b]];
    return poly_mul(a, b);
  }

  // Extended Euclid on polynomials: s*a + t*modulus = 1.
  std::uint32_t poly_inv(std::uint32_t a) const {
    Poly r0 = modulus, r1 = unpack(a);
    trim(r1);
    Poly s0{}, s1{1};
    while (!r1.empty()) {
      // (q, rem) = divmod(r0, r1)
      Poly rem = r0;
      Poly quot(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
      const std::uint64_t lead_inv = inv_mod(r1.back(), p);
      trim(rem);
      while (rem.size() >= r1.size()) {
        const std::uint32_t factor = static_cast<std::uint32_t>(rem.back() * lead_inv % p);
        const std::size_t shift = rem.size() - r1.size();
        quot[shift] = factor;
        for (std::size_t i = 0; i < r1.size(); ++i) {
          rem[shift + i] = static_cast<std::uint32_t>((rem[shift + i] + std::uint64_t{p - factor} * r1[i]) % p);
        }
        trim(rem);
      }
      // s2 = s0 - quot * s1
      Poly s2(std::max(s0.size(), quot.size() + s1.size()), 0);
      for (std::size_t i = 0; i < s0.size(); ++i) s2[i] = s0[i];
      for (std::size_t i = 0; i < quot.size(); ++i) {
        for (std::size_t j = 0; j < s1.size(); ++j) {
          const std::uint64_t term = std::uint64_t{quot[i]} * s1[j] % p;
          s2[i + j] = static_cast<std::uint32_t>((s2[i + j] + p - term) % p);
        }
      }
      trim(s2);
      r0 = std::exchange(r1, rem);
      s0 = std::exchange(s1, s2);
    }
    // r0 is a nonzero constant.
    const std::uint64_t c = inv_mod(r0[0], p);
    for (auto& x : s0) x = static_cast<std::uint32_t>(x * c % p);
    return pack(poly_mod(s0, modulus, p));
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (e == 1) return inv_mod(a, p);
    if (!log.empty()) return log[a] == 0 ? 1 : exp[(q - 1) - log[a]];
    return poly_inv(a);
  }

  void build_tables() {
    const std::uint32_t order = q - 1;
    std::vector<std::uint32_t> prime_factors;
    std::uint32_t rest = order;
    for (std::uint32_t d = 2; d * d <= rest; ++d) {
      if (rest % d == 0) {
        prime_factors.push_back(d);
        while (rest % d == 0) rest /= d;
      }
    }
    if (rest > 1) prime_factors.push_back(rest);

    auto slow_pow = [&](std::uint32_t base, std::uint64_t n) {
      std::uint32_t acc = 1;
      while (n) {
        if (n & 1) acc = poly_mul(acc, base);
        base = poly_mul(base, base);
        n >>= 1;
      }
      return acc;
    };
    std::uint32_t generator = 0;
    for (std::uint32_t g = 2; g < q && generator == 0; ++g) {
      bool primitive = true;
      for (auto r : prime_factors) {
        if (slow_pow(g, order / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) generator = g;
    }
    exp.assign(2 * std::size_t{order}, 0);
    log.assign(q, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
      exp[i] = x;
      log[x] = i;
      x = poly_mul(x, generator);
    }
    for (std::uint32_t i = order; i < 2 * order; ++i) exp[i] = exp[i - order];
  }
};

}  // namespace detail

Field Field::create(std::uint32_t p, unsigned e) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (e == 0) throw Error(ErrorCode::DegreeZero, "extension degree must be at least 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < e; ++i) {
    q *= p;
    if (q >= kMaxOrder) {
      throw Error(ErrorCode::FieldTooLarge,
                  std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^31");
    }
  }
  auto impl = std::make_shared<detail::FieldImpl>();
  impl->p = p;
  impl->e = e;
  impl->q = static_cast<std::uint32_t>(q);
  impl->radix.resize(e);
  std::uint32_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    impl->radix[i] = r;
    if (i + 1 < e) r *= p;
  }
  impl->modulus = find_modulus(p, e);
  if (e > 1 && q <= (1u << 16)) impl->build_tables();
  return Field(std::move(impl));
}

Field Field::from_order(std::uint64_t q) {
  if (q < 2) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  std::uint64_t p = 0;
  for (std::uint64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) p = q;
  unsigned e = 0;
  std::uint64_t rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1) throw Error(ErrorCode::NotPrime, std::to_string(q) + " is not a prime power");
  if (q >= kMaxOrder) throw Error(ErrorCode::FieldTooLarge, std::to_string(q) + " exceeds 2^31");
  return create(static_cast<std::uint32_t>(p), e);
}

std::uint32_t Field::p() const noexcept { return impl_->p; }
unsigned Field::e() const noexcept { return impl_->e; }
std::uint32_t Field::q() const noexcept { return impl_->q; }
const std::vector<std::uint32_t>& Field::modulus() const noexcept { return impl_->modulus; }

Felt Field::from_int(std::int64_t value) const noexcept {
  const std::int64_t p = impl_->p;
  std::int64_t r = value % p;
  if (r < 0) r += p;
  return Felt{static_cast<std::uint32_t>(r)};
}

Felt Field::from_coeffs(std::span<const std::uint32_t> coeffs) const {
  if (coeffs.size() > impl_->e) throw Error(ErrorCode::InvalidArgument, "too many coefficients");
  for (auto c : coeffs) {
    if (c >= impl_->p) throw Error(ErrorCode::InvalidArgument, "coefficient out of range");
  }
  return Felt{impl_->pack(Poly(coeffs.begin(), coeffs.end()))};
}

std::vector<std::uint32_t> Field::coeffs(Felt a) const { return impl_->unpack(a.v); }

Felt Field::element(std::uint64_t index) const {
  if (index >= impl_->q) throw Error(ErrorCode::InvalidArgument, "element index out of range");
  return Felt{static_cast<std::uint32_t>(index)};
}

std::vector<Felt> Field::elements() const {
  std::vector<Felt> out(impl_->q);
  for (std::uint32_t i = 0; i < impl_->q; ++i) out[i] = Felt{i};
  return out;
}

Felt Field::add(Felt a, Felt b) const noexcept { return Felt{impl_->add(a.v, b.v)}; }
Felt Field::sub(Felt a, Felt b) const noexcept { return Felt{impl_->add(a.v, impl_->neg(b.v))}; }
Felt Field::neg(Felt a) const noexcept { return Felt{impl_->neg(a.v)}; }
Felt Field::mul(Felt a, Felt b) const noexcept { return Felt{impl_->mul(a.v, b.v)}; }

Felt Field::inv(Felt a) const {
  if (a.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  return Felt{impl_->inv(a.v)};
}

Felt Field::pow(Felt a, std::uint64_t n) const noexcept {
  Felt acc = one();
  while (n) {
    if (n & 1) acc = mul(acc, a);
    a = mul(a, a);
    n >>= 1;
  }
  return acc;
}

std::string Field::format(Felt a) const {
  if (impl_->e == 1) return std::to_string(a.v);
  std::string out = "[";
  const auto c = impl_->unpack(a.v);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(c[i]);
  }
  out += ']';
  return out;
}

namespace {

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view whole) {
  s = strip(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::ParseError, "bad field element '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Felt Field::parse(std::string_view text) const {
  const std::string_view s = strip(text);
  if (impl_->e == 1) {
    const std::uint64_t v = parse_uint(s, text);
    if (v >= impl_->p) throw Error(ErrorCode::ParseError, "element '" + std::string(text) + "' out of range");
    return Felt{static_cast<std::uint32_t>(v)};
  }
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    throw Error(ErrorCode::ParseError, "expected [c0,c1,...] but got '" + std::string(text) + "'");
  }
  std::string_view body = s.substr(1, s.size() - 2);
  Poly c;
  while (true) {
    const auto comma = body.find(',');
    c.push_back(static_cast<std::uint32_t>(parse_uint(body.substr(0, comma), text)));
    if (c.back() >= impl_->p) throw Error(ErrorCode::ParseError, "coefficient out of range in '" + std::string(text) + "'");
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (c.size() > impl_->e) throw Error(ErrorCode::ParseError, "too many coefficients in '" + std::string(text) + "'");
  return Felt{impl_->pack(c)};
}

std::string Field::describe() const {
  std::ostringstream out;
  out << "F_" << impl_->q;
  if (impl_->e > 1) {
    out << " (";
    bool first = true;
    for (std::size_t i = impl_->modulus.size(); i-- > 0;) {
      const auto c = impl_->modulus[i];
      if (c == 0) continue;
      if (!first) out << '+';
      first = false;
      if (i == 0 || c != 1) out << c;
      if (i >= 1) out << 'x';
      if (i >= 2) out << '^' << i;
    }
    out << ')';
  }
  return out.str();
}

bool operator==(const Field& a, const Field& b) noexcept {
  return a.impl_ == b.impl_ ||
         (a.impl_->p == b.impl_->p && a.impl_->e == b.impl_->e && a.impl_->modulus == b.impl_->modulus);
}

void require_same_field(const Field& a, const Field& b) {
  if (!(a == b)) throw Error(ErrorCode::MixedFields, a.describe() + " vs " + b.describe());
}

}  // namespace pmds
