#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace causal {

inline constexpr std::size_t kDefaultMaxAtoms = 20;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), [&](char c) { return head(c) || (c >= '0' && c <= '9'); });
}

// Ordered atom vocabulary. Cheap to copy; two universes are equal when they
// list the same atoms in the same order.
class Universe {
 public:
  Universe() : data_(std::make_shared<Data>()) {}
  explicit Universe(std::vector<std::string> atoms) {
    auto d = std::make_shared<Data>();
    for (auto& a : atoms) {
      if (!is_identifier(a) || a == "true" || a == "false")
        throw std::invalid_argument("invalid atom name '" + a + "'");
      if (!d->index.emplace(a, d->atoms.size()).second)
        throw std::invalid_argument("duplicate atom '" + a + "'");
      d->atoms.push_back(std::move(a));
    }
    data_ = std::move(d);
  }

  std::size_t size() const noexcept { return data_->atoms.size(); }
  const std::vector<std::string>& atoms() const noexcept { return data_->atoms; }
  const std::string& operator[](std::size_t i) const { return data_->atoms.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const Universe& a, const Universe& b) {
    return a.data_ == b.data_ || a.atoms() == b.atoms();
  }

 private:
  struct Data {
    std::vector<std::string> atoms;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

using ModelIndex = std::uint32_t;

// Models are numbered so that ascending index is lexicographic order over the
// universe with false < true: the first atom is the most significant bit.
inline bool index_value(ModelIndex m, std::size_t atom, std::size_t n) {
  return (m >> (n - 1 - atom)) & 1U;
}

inline void check_capacity(std::size_t n, std::size_t max_atoms = kDefaultMaxAtoms) {
  if (n > max_atoms)
    throw CapacityError("universe has " + std::to_string(n) + " atoms; limit is " +
                        std::to_string(max_atoms));
  if (n > 30) throw CapacityError("universe too large to enumerate");
}

class Model {
 public:
  Model() = default;
  Model(Universe u, ModelIndex bits) : universe_(std::move(u)), bits_(bits) {}

  const Universe& universe() const noexcept { return universe_; }
  ModelIndex index() const noexcept { return bits_; }
  bool value(std::size_t atom) const { return index_value(bits_, atom, universe_.size()); }
  bool operator[](std::string_view atom) const {
    auto i = universe_.index_of(atom);
    if (!i) throw std::out_of_range("atom '" + std::string(atom) + "' not in universe");
    return value(*i);
  }
  Model with(std::string_view atom, bool v) const {
    auto i = universe_.index_of(atom);
    if (!i) throw std::out_of_range("atom '" + std::string(atom) + "' not in universe");
    ModelIndex bit = ModelIndex{1} << (universe_.size() - 1 - *i);
    return Model(universe_, v ? (bits_ | bit) : (bits_ & ~bit));
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t i = 0; i < universe_.size(); ++i) {
      if (i) out += ',';
      out += universe_[i];
      out += value(i) ? "=1" : "=0";
    }
    return out;
  }

  friend bool operator==(const Model& a, const Model& b) {
    return a.bits_ == b.bits_ && a.universe_ == b.universe_;
  }

 private:
  Universe universe_;
  ModelIndex bits_ = 0;
};

// Set of models over an n-atom universe, stored as a bitset over model indices.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::size_t atoms) : atoms_(atoms), words_(word_count(atoms), 0) {}

  static ModelSet all(std::size_t atoms) {
    ModelSet s(atoms);
    std::fill(s.words_.begin(), s.words_.end(), ~std::uint64_t{0});
    s.trim();
    return s;
  }
  static ModelSet none(std::size_t atoms) { return ModelSet(atoms); }

  std::size_t atoms() const noexcept { return atoms_; }
  std::size_t capacity() const noexcept { return std::size_t{1} << atoms_; }

  bool contains(ModelIndex m) const { return (words_[m >> 6] >> (m & 63)) & 1U; }
  void insert(ModelIndex m) { words_[m >> 6] |= std::uint64_t{1} << (m & 63); }
  void erase(ModelIndex m) { words_[m >> 6] &= ~(std::uint64_t{1} << (m & 63)); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  bool is_all() const { return *this == all(atoms_); }
  bool subset_of(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const ModelSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  ModelSet& operator&=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  ModelSet& operator|=(const ModelSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  friend ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
  friend ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }
  ModelSet operator~() const {
    ModelSet s = *this;
    for (auto& w : s.words_) w = ~w;
    s.trim();
    return s;
  }
  ModelSet minus(const ModelSet& o) const { return *this & ~o; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        auto b = static_cast<unsigned>(std::countr_zero(w));
        f(static_cast<ModelIndex>(i * 64 + b));
        w &= w - 1;
      }
    }
  }
  std::vector<ModelIndex> indices() const {
    std::vector<ModelIndex> out;
    for_each([&](ModelIndex m) { out.push_back(m); });
    return out;
  }
  std::optional<ModelIndex> first() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<ModelIndex>(i * 64 + std::countr_zero(words_[i]));
    return std::nullopt;
  }

  friend bool operator==(const ModelSet& a, const ModelSet& b) {
    return a.atoms_ == b.atoms_ && a.words_ == b.words_;
  }

 private:
  static std::size_t word_count(std::size_t atoms) {
    return ((std::size_t{1} << atoms) + 63) / 64;
  }
  void trim() {
    std::size_t cap = capacity();
    if (cap % 64) words_.back() &= (std::uint64_t{1} << (cap % 64)) - 1;
  }
  std::size_t atoms_ = 0;
  std::vector<std::uint64_t> words_ = std::vector<std::uint64_t>(1, 0);
};

inline std::vector<Model> enumerate_models(const Universe& u, std::size_t max_atoms = kDefaultMaxAtoms) {
  check_capacity(u.size(), max_atoms);
  std::vector<Model> out;
  const ModelIndex count = ModelIndex{1} << u.size();
  out.reserve(count);
  for (ModelIndex m = 0; m < count; ++m) out.emplace_back(u, m);
  return out;
}

inline std::vector<Model> models_of(const ModelSet& s, const Universe& u) {
  std::vector<Model> out;
  s.for_each([&](ModelIndex m) { out.emplace_back(u, m); });
  return out;
}

}  // namespace causal
