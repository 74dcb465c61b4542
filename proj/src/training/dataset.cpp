#include "coat/training/dataset.hpp"

#include <algorithm>
#include <cstring>
#include <exception>

#include "coat/error.hpp"
#include "coat/random.hpp"
#include "coat/search/oracle.hpp"

namespace coat {

double tier_difficulty(DomainTag domain, int height, int width, int boxes) {
  const double area = static_cast<double>(height) * width;
  return domain == DomainTag::sokoban ? boxes * 10000.0 + area : area;
}

double instance_difficulty(const Instance& instance) {
  return visit_instance(instance, [](auto d, const auto& inst) {
    const auto& g = inst.world.geometry;
    int boxes = 0;
    if constexpr (std::is_same_v<decltype(d), Sokoban>) boxes = static_cast<int>(inst.initial.boxes.size());
    return tier_difficulty(decltype(d)::tag, g.height, g.width, boxes);
  });
}

void DatasetOptions::validate() const {
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw ConfigError("validation_fraction must be in [0, 1)");
}

bool in_validation_split(const Instance& instance, double validation_fraction) {
  const double u = static_cast<double>(fnv1a(serialize_instance(instance)) >> 11) * 0x1.0p-53;
  return u < validation_fraction;
}

Dataset::Dataset(DomainTag domain, DatasetOptions options) : domain_(domain), options_(options) { options_.validate(); }

double Dataset::max_difficulty() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, r.difficulty);
  return m;
}

namespace {

std::string state_key(const EncodedPair& e) {
  const auto data = e.tensor.data();
  std::string key(data.size() * sizeof(float) + 2 * sizeof(std::size_t), '\0');
  const std::size_t dims[2] = {e.tensor.height(), e.tensor.width()};
  std::memcpy(key.data(), dims, sizeof(dims));
  std::memcpy(key.data() + sizeof(dims), data.data(), data.size() * sizeof(float));
  return key;
}

struct Expanded {
  std::vector<EncodedPair> encoded;  // s_0 .. s_l
};

Expanded expand(const PlanRecord& rec, std::size_t index) {
  return visit_instance(rec.instance, [&](auto d, const auto& inst) {
    using D = decltype(d);
    const auto check = validate_plan<D>(inst.world, inst.initial, rec.actions);
    if (!check.valid)
      throw ContractError("plan record " + std::to_string(index) + " is invalid at action index " +
                          std::to_string(check.failure_index));
    Expanded out;
    auto s = inst.initial;
    out.encoded.push_back(encode_pair<D>(inst.world, s));
    for (int a : rec.actions) {
      s = *D::apply(inst.world, s, a);
      out.encoded.push_back(encode_pair<D>(inst.world, s));
    }
    return out;
  });
}

}  // namespace

void Dataset::append(std::vector<PlanRecord> records) {
  // Validate everything first so a bad record leaves the dataset untouched.
  std::vector<Expanded> expanded;
  expanded.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (domain_of(records[i].instance) != domain_)
      throw ContractError("plan record " + std::to_string(i) + " is a " + to_string(domain_of(records[i].instance)) +
                          " instance in a " + to_string(domain_) + " dataset");
    expanded.push_back(expand(records[i], i));
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t rec = records_.size();
    const bool validation = in_validation_split(records[i].instance, options_.validation_fraction);
    const std::size_t l = records[i].actions.size();
    const std::size_t count = l + (options_.goal_samples ? 1 : 0);
    for (std::size_t s = 0; s < count; ++s) {
      Sample sample{rec, s, static_cast<int>(l - s), s < l ? std::optional<int>(records[i].actions[s]) : std::nullopt};
      const std::size_t id = samples_.size();
      auto& same = by_state_[state_key(expanded[i].encoded[s])];
      if (!same.empty()) {
        const int known = samples_[same.front()].distance;
        if (sample.distance < known)
          for (auto j : same) samples_[j].distance = sample.distance;
        else
          sample.distance = known;
      }
      same.push_back(id);
      samples_.push_back(sample);
      encoded_.push_back(std::move(expanded[i].encoded[s]));
      (validation ? validation_ : train_).push_back(id);
    }
    records_.push_back(std::move(records[i]));
    validation_record_.push_back(validation ? 1 : 0);
  }
}

Dataset build_dataset(DomainTag domain, std::vector<PlanRecord> records, DatasetOptions options) {
  Dataset d(domain, options);
  d.append(std::move(records));
  return d;
}

std::vector<PlanRecord> oracle_records(const std::vector<Instance>& instances, const std::string& tier) {
  std::vector<PlanRecord> out(instances.size());
  std::vector<std::exception_ptr> errors(instances.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < instances.size(); ++i) {
    try {
      const auto& inst = instances[i];
      auto plan = visit_instance(inst, [](auto tag, const auto& in) {
        using D = decltype(tag);
        return oracle_solve<D>(in.world, in.initial).actions;
      });
      const auto& fields = meta_of(inst).fields;
      const auto seed = fields.find("seed");
      out[i] = PlanRecord{inst, std::move(plan), tier, instance_difficulty(inst),
                          seed == fields.end() ? 0 : std::stoull(seed->second)};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace coat
