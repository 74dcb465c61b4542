#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>

#include "coat/tensor/tensor.hpp"

namespace coat {

/// Named parameters in canonical (lexicographic) order.
template <typename T>
class ParamStore {
 public:
  struct Entry {
    Tensor<T> value;
    bool trainable = true;
  };

  void add(const std::string& name, Tensor<T> value, bool trainable = true) {
    if (entries_.contains(name)) throw ConfigError("duplicate parameter name: " + name);
    entries_.emplace(name, Entry{std::move(value), trainable});
  }

  bool contains(const std::string& name) const { return entries_.contains(name); }

  Tensor<T>& at(const std::string& name) { return find(name).value; }
  const Tensor<T>& at(const std::string& name) const { return find(name).value; }

  bool trainable(const std::string& name) const { return find(name).trainable; }
  void set_trainable(const std::string& name, bool on) { find(name).trainable = on; }

  std::size_t size() const { return entries_.size(); }

  std::size_t scalar_count() const {
    std::size_t n = 0;
    for (const auto& [_, e] : entries_) n += e.value.size();
    return n;
  }

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  template <typename U>
  ParamStore<U> cast() const {
    ParamStore<U> out;
    for (const auto& [name, e] : entries_) out.add(name, e.value.template cast<U>(), e.trainable);
    return out;
  }

  bool operator==(const ParamStore& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (auto a = entries_.begin(), b = other.entries_.begin(); a != entries_.end(); ++a, ++b)
      if (a->first != b->first || a->second.value != b->second.value || a->second.trainable != b->second.trainable)
        return false;
    return true;
  }

 private:
  Entry& find(const std::string& name) {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw ConfigError("unknown parameter: " + name);
    return it->second;
  }
  const Entry& find(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw ConfigError("unknown parameter: " + name);
    return it->second;
  }

  std::map<std::string, Entry> entries_;
};

template <typename T>
using Gradients = std::map<std::string, Tensor<T>>;

/// Uniform He-style initialisation: U(-sqrt(6/fan_in), sqrt(6/fan_in)).
inline constexpr double kHeUniformGain = 6.0;

template <typename T>
Tensor<T> he_uniform(Shape shape, std::size_t fan_in, std::mt19937_64& rng) {
  Tensor<T> t(std::move(shape));
  const double bound = std::sqrt(kHeUniformGain / static_cast<double>(fan_in));
  // Explicit mapping of raw 64-bit draws keeps values identical across standard libraries.
  for (auto& x : t.storage()) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    x = static_cast<T>((2.0 * unit - 1.0) * bound);
  }
  return t;
}

}  // namespace coat
