#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "euclidlab/natural.hpp"

namespace euclidlab {

/// Largest n for which families are enumerated exhaustively (2^24 subsets).
inline constexpr unsigned kMaxEnumerableN = 24;
/// Largest n representable by a Subset bitmask.
inline constexpr unsigned kMaxN = 64;

/// A subset of S_n = {1, ..., n}; index i is stored in bit i - 1.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  /// From 1-based indices; throws DomainError on 0, > 64 or duplicates.
  static Subset from_indices(std::span<const unsigned> indices);
  static Subset from_indices(std::initializer_list<unsigned> indices) {
    return from_indices(std::span<const unsigned>(indices.begin(), indices.size()));
  }
  /// S_n itself.
  static Subset full(unsigned n) { return Subset(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1); }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr unsigned size() const { return static_cast<unsigned>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(unsigned index) const {
    return index >= 1 && index <= 64 && ((bits_ >> (index - 1)) & 1u);
  }
  /// Largest index present (0 for the empty set).
  constexpr unsigned max_index() const { return 64u - static_cast<unsigned>(std::countl_zero(bits_)); }

  /// 1-based indices, ascending.
  std::vector<unsigned> indices() const;

  Subset complement(unsigned n) const { return Subset(full(n).bits_ & ~bits_); }

  friend constexpr bool operator==(Subset, Subset) = default;

 private:
  std::uint64_t bits_ = 0;
};

/// Canonical order: by cardinality, then lexicographically on sorted indices.
constexpr bool canonical_less(Subset a, Subset b) {
  if (a.size() != b.size()) return a.size() < b.size();
  const std::uint64_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  // The smallest index in the symmetric difference decides.
  return (a.bits() & (diff & (~diff + 1))) != 0;
}

struct CanonicalOrder {
  constexpr bool operator()(Subset a, Subset b) const { return canonical_less(a, b); }
};

/// "1,2,5"
std::string to_string(Subset s);
Subset parse_subset(std::string_view text);

enum class Sign : int { minus = -1, plus = 1 };

inline int to_int(Sign s) { return static_cast<int>(s); }
/// Accepts "+1", "1", "+", "-1", "-".
Sign parse_sign(std::string_view text);
Sign sign_from_int(long v);

/// A finite set of nonempty proper subsets of S_n, stored in canonical order.
class SubsetFamily {
 public:
  /// All subsets of S_n whose size lies in `sizes`. Requires 3 <= n <= 24 and
  /// every size in [1, n-1].
  static SubsetFamily by_sizes(unsigned n, const std::set<unsigned>& sizes);
  /// Explicit members (deduplicated). Requires 3 <= n <= 64; every member must
  /// be a nonempty proper subset of S_n.
  static SubsetFamily from_subsets(unsigned n, std::vector<Subset> members);

  unsigned n() const { return n_; }
  std::span<const Subset> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Subset s) const;

  /// Set when the family was built from cardinalities; drives serialization.
  const std::optional<std::set<unsigned>>& sizes() const { return sizes_; }

  /// Union with extra members; the result is stored explicitly unless
  /// `extra` is empty.
  SubsetFamily with_extra(std::span<const Subset> extra) const;

  /// Same members regardless of how the family was described.
  friend bool operator==(const SubsetFamily& a, const SubsetFamily& b) {
    return a.n_ == b.n_ && a.members_ == b.members_;
  }

 private:
  SubsetFamily(unsigned n, std::vector<Subset> members, std::optional<std::set<unsigned>> sizes)
      : n_(n), members_(std::move(members)), sizes_(std::move(sizes)) {}

  unsigned n_ = 0;
  std::vector<Subset> members_;
  std::optional<std::set<unsigned>> sizes_;
};

/// build_family(n, sizes) = SubsetFamily::by_sizes.
SubsetFamily build_family(unsigned n, const std::set<unsigned>& sizes);

/// {S_n \ I : I in f}. An involution.
SubsetFamily opposite_family(const SubsetFamily& f);

/// A sign for every subset: sparse overrides on top of a default.
class SignAssignment {
 public:
  explicit SignAssignment(Sign default_sign = Sign::plus) : default_(default_sign) {}

  SignAssignment& set(Subset s, Sign sign) {
    overrides_[s] = sign;
    return *this;
  }
  Sign operator()(Subset s) const;
  Sign default_sign() const { return default_; }
  const std::map<Subset, Sign, CanonicalOrder>& overrides() const { return overrides_; }

  /// The common sign on every member of f, if there is one.
  std::optional<Sign> constant_on(const SubsetFamily& f) const;

  friend bool operator==(const SignAssignment&, const SignAssignment&) = default;

 private:
  Sign default_;
  std::map<Subset, Sign, CanonicalOrder> overrides_;
};

/// Distinct primes p_1 < ... < p_n with exponents v_i >= 1, a family D of
/// nonempty proper subsets of S_n, and signs eps.
class PrimePowerInstance {
 public:
  /// Throws DomainError when an invariant fails.
  PrimePowerInstance(std::vector<Natural> primes, std::vector<std::uint32_t> exponents,
                     SubsetFamily family, SignAssignment signs);

  unsigned n() const { return static_cast<unsigned>(primes_.size()); }
  const std::vector<Natural>& primes() const { return primes_; }
  const std::vector<std::uint32_t>& exponents() const { return exponents_; }
  const SubsetFamily& family() const { return family_; }
  const SignAssignment& signs() const { return signs_; }

  /// p_i^{v_i} for 1-based i.
  const Natural& prime_power(unsigned index) const { return powers_.at(index - 1); }
  /// P = prod p_i^{v_i}.
  const Natural& total_product() const { return total_; }

  /// P_I; throws DomainError for an empty I or an index beyond n.
  Natural subset_product(Subset s) const;

  /// P_I - eps(I) for I in the family; throws DomainError otherwise.
  Integer target_value(Subset s) const;

  /// P_I - eps(I) for any nonempty I, member of the family or not.
  Integer signed_value(Subset s) const;

  Sign sign_of(Subset s) const { return signs_(s); }
  /// eps_{-I} := eps(S_n \ I).
  Sign complement_sign(Subset s) const { return signs_(s.complement(n())); }

  /// Complement closure of D at size k and eps_I = eps_{-I} there. 1 <= k <= n-1.
  bool is_k_symmetric(unsigned k) const;

  /// Canonical hash of the serialized instance.
  std::string digest() const;

  friend bool operator==(const PrimePowerInstance& a, const PrimePowerInstance& b) {
    return a.primes_ == b.primes_ && a.exponents_ == b.exponents_ && a.family_ == b.family_ &&
           a.signs_ == b.signs_;
  }

 private:
  std::vector<Natural> primes_;
  std::vector<std::uint32_t> exponents_;
  SubsetFamily family_;
  SignAssignment signs_;
  std::vector<Natural> powers_;
  Natural total_;
};

nlohmann::json to_json_value(Subset s);
nlohmann::json to_json_value(const SubsetFamily& f);
nlohmann::json to_json_value(const SignAssignment& s);
nlohmann::json to_json_value(const PrimePowerInstance& inst);

Subset subset_from_json(const nlohmann::json& j);
SubsetFamily family_from_json(unsigned n, const nlohmann::json& j);
SignAssignment signs_from_json(const nlohmann::json& j);
/// Reads {"primes", "exponents", "family", "signs"}; unknown keys are rejected.
PrimePowerInstance instance_from_json(const nlohmann::json& j);

}  // namespace euclidlab
