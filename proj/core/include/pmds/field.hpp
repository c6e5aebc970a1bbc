#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmds {

/// An element of F_q stored as the integer sum(c_i * p^i) of its coefficient
/// vector in the polynomial basis. The integer doubles as the element's index
/// in enumeration order, so zero is 0 and one is 1.
struct Felt {
  std::uint32_t v = 0;

  friend constexpr auto operator<=>(Felt, Felt) = default;
  constexpr bool is_zero() const noexcept { return v == 0; }
};

namespace detail {
struct FieldImpl;
}

/// Immutable handle to a finite field F_q, q = p^e. Copies share state.
///
/// For e = 1 arithmetic is plain modular arithmetic. For e > 1 elements are
/// residues modulo the lexicographically smallest monic irreducible
/// polynomial of degree e (compared low degree first); multiplication uses
/// log tables when q <= 2^16 and polynomial arithmetic otherwise.
class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 31;

  /// Throws NotPrime, DegreeZero or FieldTooLarge.
  static Field create(std::uint32_t p, unsigned e = 1);
  /// Factors q as a prime power; throws NotPrime when q is not one.
  static Field from_order(std::uint64_t q);

  std::uint32_t p() const noexcept;
  unsigned e() const noexcept;
  std::uint32_t q() const noexcept;
  /// Q := q + 1, the number of points on P^1(F_q).
  std::uint64_t Q() const noexcept { return std::uint64_t{q()} + 1; }
  /// Monic modulus, coefficients low to high (length e + 1). For e = 1 this
  /// is the conventional, unused polynomial x.
  const std::vector<std::uint32_t>& modulus() const noexcept;

  Felt zero() const noexcept { return Felt{0}; }
  Felt one() const noexcept { return Felt{1}; }
  /// Image of an integer in the prime subfield.
  Felt from_int(std::int64_t value) const noexcept;
  /// Element with the given coefficients (low to high, at most e of them);
  /// throws InvalidArgument on out-of-range coefficients.
  Felt from_coeffs(std::span<const std::uint32_t> coeffs) const;
  std::vector<std::uint32_t> coeffs(Felt a) const;
  /// Throws InvalidArgument when index >= q.
  Felt element(std::uint64_t index) const;
  /// All q elements in enumeration order (coefficient-lexicographic, zero first).
  std::vector<Felt> elements() const;
  bool contains(Felt a) const noexcept { return a.v < q(); }

  Felt add(Felt a, Felt b) const noexcept;
  Felt sub(Felt a, Felt b) const noexcept;
  Felt neg(Felt a) const noexcept;
  Felt mul(Felt a, Felt b) const noexcept;
  /// Throws DivisionByZero.
  Felt inv(Felt a) const;
  Felt div(Felt a, Felt b) const { return mul(a, inv(b)); }
  /// a^n for n >= 0; 0^0 = 1.
  Felt pow(Felt a, std::uint64_t n) const noexcept;

  /// Decimal for e = 1, "[c0,c1,...]" for e > 1.
  std::string format(Felt a) const;
  /// Inverse of format(); throws ParseError.
  Felt parse(std::string_view text) const;
  /// "F_19", "F_9 (x^2+1)" style label.
  std::string describe() const;

  friend bool operator==(const Field& a, const Field& b) noexcept;

 private:
  explicit Field(std::shared_ptr<const detail::FieldImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::FieldImpl> impl_;
};

/// Throws MixedFields unless a == b.
void require_same_field(const Field& a, const Field& b);

bool is_prime(std::uint64_t n) noexcept;

}  // namespace pmds
