#pragma once

#include <map>
#include <string>
#include <vector>

#include "coat/domains/generate.hpp"
#include "coat/model/model.hpp"
#include "coat/training/evaluate.hpp"
#include "coat/training/trainer.hpp"

namespace coat {

inline constexpr int kConfigFormatVersion = 1;

/// Everything one desk pipeline run needs. Text form: flat key=value lines,
/// see config_keys() for the documented keys.
struct ExperimentConfig {
  DomainTag domain = DomainTag::maze;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0 = OpenMP default

  // training instances
  GeneratorParams data;
  std::size_t data_instances = 200;
  std::uint64_t data_seed = 1000;
  double validation_fraction = 0.1;

  // held-out evaluation, one tier per size (square grids)
  std::vector<int> eval_sizes{6};
  std::size_t eval_instances = 50;
  std::uint64_t eval_seed = 100000;
  std::vector<int> eval_rotations{0};
  std::vector<std::string> eval_solvers{"coat", "blind"};
  SearchBudget budget{20000, 3600.0};

  bool paper_model = false;
  HeadMode head = HeadMode::dual;
  TrainConfig train;

  std::vector<int> curriculum_sizes;
  std::size_t curriculum_instances = 50;
  std::uint64_t curriculum_seed = 50000;
  SearchBudget curriculum_budget{20000, 3600.0};

  ModelConfig model_config() const;
  void validate() const;
};

/// Documented keys with one-line descriptions.
const std::map<std::string, std::string>& config_keys();

/// Unknown keys and bad values are ConfigErrors; a "version" other than 1
/// is rejected.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
std::string serialize_config(const ExperimentConfig& config);

/// COAT_OUT_DIR and COAT_THREADS override the file.
void apply_environment(ExperimentConfig& config);

/// Desk presets: maze 6x6 with one teleport pair, sokoban 7x7 with two
/// boxes, floor-tile 3x3.
ExperimentConfig desk_preset(DomainTag domain);

}  // namespace coat
