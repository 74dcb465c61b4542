#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coat/domains/instance.hpp"

namespace coat {

/// A solved instance with where it came from.
struct PlanRecord {
  Instance instance;
  std::vector<int> actions;
  std::string tier;
  /// Orders tiers; see tier_difficulty().
  double difficulty = 0.0;
  std::uint64_t seed = 0;
};

/// Sokoban ranks by box count, then area; the grid domains by area.
double tier_difficulty(DomainTag domain, int height, int width, int boxes);
double instance_difficulty(const Instance& instance);

/// One training example: state s_i of a record's plan, its distance label
/// and the action taken there (absent at the goal).
struct Sample {
  std::size_t record = 0;
  std::size_t state_index = 0;
  int distance = 0;
  std::optional<int> action;
};

struct DatasetOptions {
  bool goal_samples = true;
  /// Share of instances (not states) routed to validation.
  double validation_fraction = 0.1;

  void validate() const;
  bool operator==(const DatasetOptions&) const = default;
};

class Dataset {
 public:
  Dataset(DomainTag domain, DatasetOptions options = {});

  DomainTag domain() const { return domain_; }
  const DatasetOptions& options() const { return options_; }
  const std::vector<PlanRecord>& records() const { return records_; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<std::size_t>& train_indices() const { return train_; }
  const std::vector<std::size_t>& validation_indices() const { return validation_; }
  const EncodedPair& encoded(std::size_t sample) const { return encoded_[sample]; }
  bool record_in_validation(std::size_t record) const { return validation_record_[record] != 0; }
  std::size_t size() const { return samples_.size(); }
  double max_difficulty() const;

  /// Replays and appends plans. Throws ContractError naming the record and the
  /// first failing action index; nothing is appended in that case. A state
  /// already present with a larger distance label takes the smaller one.
  void append(std::vector<PlanRecord> records);

 private:
  DomainTag domain_;
  DatasetOptions options_;
  std::vector<PlanRecord> records_;
  std::vector<std::uint8_t> validation_record_;
  std::vector<Sample> samples_;
  std::vector<EncodedPair> encoded_;
  std::vector<std::size_t> train_;
  std::vector<std::size_t> validation_;
  // Encoded bytes of a state -> samples holding that state.
  std::unordered_map<std::string, std::vector<std::size_t>> by_state_;
};

Dataset build_dataset(DomainTag domain, std::vector<PlanRecord> records, DatasetOptions options = {});

/// Optimal plans for `instances` from the oracle, solved in parallel and
/// returned in input order. Seeds come from the instance meta.
std::vector<PlanRecord> oracle_records(const std::vector<Instance>& instances, const std::string& tier);

/// Validation membership of an instance: a pure function of its text.
bool in_validation_split(const Instance& instance, double validation_fraction);

}  // namespace coat
