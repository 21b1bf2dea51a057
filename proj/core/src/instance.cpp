#include "euclidlab/instance.hpp"

#include <algorithm>

#include "euclidlab/digest.hpp"
#include "euclidlab/errors.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/primality.hpp"

namespace euclidlab {

Subset Subset::from_indices(std::span<const unsigned> indices) {
  std::uint64_t bits = 0;
  for (unsigned i : indices) {
    if (i < 1 || i > kMaxN) throw DomainError("subset index " + std::to_string(i) + " out of range");
    const std::uint64_t bit = std::uint64_t{1} << (i - 1);
    if (bits & bit) throw DomainError("subset index " + std::to_string(i) + " repeated");
    bits |= bit;
  }
  return Subset(bits);
}

std::vector<unsigned> Subset::indices() const {
  std::vector<unsigned> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
    out.push_back(static_cast<unsigned>(std::countr_zero(b)) + 1);
  }
  return out;
}

std::string to_string(Subset s) {
  std::string out;
  for (unsigned i : s.indices()) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  }
  return out;
}

Subset parse_subset(std::string_view text) {
  std::vector<unsigned> idx;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty()) throw DomainError("malformed subset '" + std::string(text) + "'");
    const Natural v = parse_natural(tok);
    if (!fits_u64(v) || v > kMaxN) throw DomainError("subset index out of range in '" + std::string(text) + "'");
    idx.push_back(static_cast<unsigned>(v.get_ui()));
    pos = comma + 1;
  }
  return Subset::from_indices(idx);
}

Sign sign_from_int(long v) {
  if (v == 1) return Sign::plus;
  if (v == -1) return Sign::minus;
  throw DomainError("sign must be +1 or -1, got " + std::to_string(v));
}

Sign parse_sign(std::string_view text) {
  if (text == "+1" || text == "1" || text == "+") return Sign::plus;
  if (text == "-1" || text == "-") return Sign::minus;
  throw DomainError("sign must be +1 or -1, got '" + std::string(text) + "'");
}

// --- SubsetFamily ----------------------------------------------------------

namespace {

void check_n(unsigned n, unsigned limit) {
  if (n < 3) throw DomainError("family: n must be >= 3, got " + std::to_string(n));
  if (n > limit) {
    throw DomainError("family: n = " + std::to_string(n) + " exceeds the limit " +
                      std::to_string(limit));
  }
}

// Next k-subset of S_n in lexicographic order of sorted indices, or false.
bool next_combination(std::vector<unsigned>& c, unsigned n) {
  const auto k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - (k - 1 - i)) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SubsetFamily SubsetFamily::by_sizes(unsigned n, const std::set<unsigned>& sizes) {
  check_n(n, kMaxEnumerableN);
  std::vector<Subset> members;
  for (unsigned s : sizes) {
    if (s < 1 || s > n - 1) {
      throw DomainError("family: size " + std::to_string(s) + " outside [1, " +
                        std::to_string(n - 1) + "]");
    }
    std::vector<unsigned> c(s);
    for (unsigned i = 0; i < s; ++i) c[i] = i + 1;
    do {
      members.push_back(Subset::from_indices(c));
    } while (next_combination(c, n));
  }
  // Sizes ascend and each block is lexicographic, so this is canonical order.
  return SubsetFamily(n, std::move(members), sizes);
}

SubsetFamily SubsetFamily::from_subsets(unsigned n, std::vector<Subset> members) {
  check_n(n, kMaxN);
  const Subset full = Subset::full(n);
  for (Subset s : members) {
    if (s.empty()) throw DomainError("family: empty subset");
    if ((s.bits() & ~full.bits()) != 0) {
      throw DomainError("family: subset {" + to_string(s) + "} not contained in S_" + std::to_string(n));
    }
    if (s == full) throw DomainError("family: S_" + std::to_string(n) + " is not a proper subset");
  }
  std::sort(members.begin(), members.end(), CanonicalOrder{});
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return SubsetFamily(n, std::move(members), std::nullopt);
}

bool SubsetFamily::contains(Subset s) const {
  return std::binary_search(members_.begin(), members_.end(), s, CanonicalOrder{});
}

SubsetFamily SubsetFamily::with_extra(std::span<const Subset> extra) const {
  if (extra.empty()) return *this;
  std::vector<Subset> all(members_.begin(), members_.end());
  all.insert(all.end(), extra.begin(), extra.end());
  return from_subsets(n_, std::move(all));
}

SubsetFamily build_family(unsigned n, const std::set<unsigned>& sizes) {
  return SubsetFamily::by_sizes(n, sizes);
}

SubsetFamily opposite_family(const SubsetFamily& f) {
  if (f.sizes()) {
    std::set<unsigned> flipped;
    for (unsigned s : *f.sizes()) flipped.insert(f.n() - s);
    return SubsetFamily::by_sizes(f.n(), flipped);
  }
  std::vector<Subset> out;
  out.reserve(f.size());
  for (Subset s : f.members()) out.push_back(s.complement(f.n()));
  return SubsetFamily::from_subsets(f.n(), std::move(out));
}

// --- SignAssignment --------------------------------------------------------

Sign SignAssignment::operator()(Subset s) const {
  auto it = overrides_.find(s);
  return it == overrides_.end() ? default_ : it->second;
}

std::optional<Sign> SignAssignment::constant_on(const SubsetFamily& f) const {
  std::optional<Sign> common;
  for (Subset s : f.members()) {
    const Sign v = (*this)(s);
    if (common && *common != v) return std::nullopt;
    common = v;
  }
  return common;
}

// --- PrimePowerInstance ----------------------------------------------------

PrimePowerInstance::PrimePowerInstance(std::vector<Natural> primes,
                                       std::vector<std::uint32_t> exponents, SubsetFamily family,
                                       SignAssignment signs)
    : primes_(std::move(primes)),
      exponents_(std::move(exponents)),
      family_(std::move(family)),
      signs_(std::move(signs)) {
  if (primes_.size() != exponents_.size()) {
    throw DomainError("instance: " + std::to_string(primes_.size()) + " primes but " +
                      std::to_string(exponents_.size()) + " exponents");
  }
  if (family_.n() != primes_.size()) {
    throw DomainError("instance: family is over S_" + std::to_string(family_.n()) + " but there are " +
                      std::to_string(primes_.size()) + " primes");
  }
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i])) throw DomainError("instance: " + to_string(primes_[i]) + " is not prime");
    if (i > 0 && !(primes_[i - 1] < primes_[i])) {
      throw DomainError("instance: primes must be strictly increasing");
    }
    if (exponents_[i] < 1) throw DomainError("instance: exponents must be >= 1");
  }
  for (const auto& [s, sign] : signs_.overrides()) {
    if (s.empty() || s.max_index() > n() || s == Subset::full(n())) {
      throw DomainError("instance: sign override for {" + to_string(s) +
                        "} is not a nonempty proper subset of S_" + std::to_string(n()));
    }
  }
  powers_.reserve(primes_.size());
  total_ = 1;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    powers_.push_back(pow(primes_[i], exponents_[i]));
    total_ *= powers_.back();
  }
}

Natural PrimePowerInstance::subset_product(Subset s) const {
  if (s.empty()) throw DomainError("subset_product: empty subset");
  if (s.max_index() > n()) {
    throw DomainError("subset_product: {" + to_string(s) + "} is not contained in S_" + std::to_string(n()));
  }
  Natural out = 1;
  for (unsigned i : s.indices()) out *= powers_[i - 1];
  return out;
}

Integer PrimePowerInstance::signed_value(Subset s) const {
  return subset_product(s) - to_int(signs_(s));
}

Integer PrimePowerInstance::target_value(Subset s) const {
  if (!family_.contains(s)) {
    throw DomainError("target_value: {" + to_string(s) + "} is not in the family");
  }
  return signed_value(s);
}

bool PrimePowerInstance::is_k_symmetric(unsigned k) const {
  if (k < 1 || k >= n()) {
    throw DomainError("is_k_symmetric: k must lie in [1, " + std::to_string(n() - 1) + "]");
  }
  for (Subset s : family_.members()) {
    if (s.size() != k) continue;
    const Subset c = s.complement(n());
    if (!family_.contains(c)) return false;  // (i): I must lie in D^op
    if (signs_(s) != signs_(c)) return false;  // (ii)
  }
  return true;
}

std::string PrimePowerInstance::digest() const { return canonical_digest(to_json_value(*this)); }

// --- JSON ------------------------------------------------------------------

nlohmann::json to_json_value(Subset s) {
  auto out = nlohmann::json::array();
  for (unsigned i : s.indices()) out.push_back(i);
  return out;
}

nlohmann::json to_json_value(const SubsetFamily& f) {
  if (f.sizes()) return {{"sizes", *f.sizes()}};
  auto subsets = nlohmann::json::array();
  for (Subset s : f.members()) subsets.push_back(to_json_value(s));
  return {{"subsets", subsets}};
}

nlohmann::json to_json_value(const SignAssignment& s) {
  auto overrides = nlohmann::json::object();
  for (const auto& [subset, sign] : s.overrides()) overrides[to_string(subset)] = to_int(sign);
  return {{"default", to_int(s.default_sign())}, {"overrides", overrides}};
}

nlohmann::json to_json_value(const PrimePowerInstance& inst) {
  return {{"primes", to_json_value(inst.primes())},
          {"exponents", inst.exponents()},
          {"family", to_json_value(inst.family())},
          {"signs", to_json_value(inst.signs())}};
}

namespace {

// Parsed text yields unsigned numbers; values built in code are often signed.
bool is_count(const nlohmann::json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

}  // namespace

Subset subset_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw DomainError("subset must be an array of indices, got " + j.dump());
  std::vector<unsigned> idx;
  for (const auto& v : j) {
    if (!is_count(v)) throw DomainError("subset index must be a positive integer, got " + v.dump());
    idx.push_back(v.get<unsigned>());
  }
  return Subset::from_indices(idx);
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  if (!j.is_object()) throw DomainError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw DomainError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace

SubsetFamily family_from_json(unsigned n, const nlohmann::json& j) {
  if (j.is_array()) {
    std::vector<Subset> members;
    for (const auto& s : j) members.push_back(subset_from_json(s));
    return SubsetFamily::from_subsets(n, std::move(members));
  }
  reject_unknown_keys(j, {"sizes", "subsets"}, "family");
  if (j.contains("sizes") == j.contains("subsets")) {
    throw DomainError("family: exactly one of 'sizes' or 'subsets' is required");
  }
  if (j.contains("sizes")) {
    std::set<unsigned> sizes;
    for (const auto& v : j.at("sizes")) {
      if (!is_count(v)) throw DomainError("family: sizes must be positive integers");
      sizes.insert(v.get<unsigned>());
    }
    return SubsetFamily::by_sizes(n, sizes);
  }
  return family_from_json(n, j.at("subsets"));
}

SignAssignment signs_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return SignAssignment(sign_from_int(j.get<long>()));
  reject_unknown_keys(j, {"default", "overrides"}, "signs");
  SignAssignment out(j.contains("default") ? sign_from_int(j.at("default").get<long>()) : Sign::plus);
  if (j.contains("overrides")) {
    const auto& o = j.at("overrides");
    if (!o.is_object()) throw DomainError("signs: overrides must be an object");
    for (const auto& [key, value] : o.items()) {
      if (!value.is_number_integer()) throw DomainError("signs: override values must be +1 or -1");
      out.set(parse_subset(key), sign_from_int(value.get<long>()));
    }
  }
  return out;
}

PrimePowerInstance instance_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"primes", "exponents", "family", "signs"}, "instance");
  for (const char* key : {"primes", "exponents", "family"}) {
    if (!j.contains(key)) throw DomainError(std::string("instance: missing key '") + key + "'");
  }
  std::vector<Natural> primes;
  for (const auto& p : j.at("primes")) primes.push_back(natural_from_json(p));
  std::vector<std::uint32_t> exponents;
  for (const auto& e : j.at("exponents")) {
    if (!is_count(e)) throw DomainError("instance: exponents must be positive integers");
    exponents.push_back(e.get<std::uint32_t>());
  }
  SubsetFamily family = family_from_json(static_cast<unsigned>(primes.size()), j.at("family"));
  SignAssignment signs = j.contains("signs") ? signs_from_json(j.at("signs")) : SignAssignment();
  return PrimePowerInstance(std::move(primes), std::move(exponents), std::move(family), std::move(signs));
}

}  // namespace euclidlab
