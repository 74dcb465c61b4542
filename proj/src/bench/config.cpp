#include "coat/bench/config.hpp"

#include <cstdlib>
#include <sstream>

#include "coat/bench/io.hpp"
#include "coat/error.hpp"

namespace coat {

namespace {

template <typename T>
T number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in || !in.eof()) throw ConfigError("config key " + key + ": '" + text + "' is not a number");
  return v;
}

std::vector<int> int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(number<int>(key, text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::string> word_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (!text.empty()) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  return out.str();
}

std::string real(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

ModelConfig ExperimentConfig::model_config() const {
  const auto in = input_channels(domain), actions = action_count(domain), agents = agent_count(domain);
  return paper_model ? ModelConfig::paper(in, actions, head, agents) : ModelConfig::desk(in, actions, head, agents);
}

void ExperimentConfig::validate() const {
  if (data.domain != domain) throw ConfigError("config: data generator domain differs from domain");
  data.validate();
  train.validate();
  budget.validate();
  curriculum_budget.validate();
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0))
    throw ConfigError("config: data.validation_fraction must be in [0, 1)");
  if (data_instances == 0) throw ConfigError("config: data.instances must be positive");
  if (eval_sizes.empty() || eval_instances == 0) throw ConfigError("config: evaluation needs sizes and instances");
  for (int q : eval_rotations)
    if (q < 0 || q > 3) throw ConfigError("config: eval.rotations takes quarter turns 0..3");
  for (const auto& s : eval_solvers) parse_solver_kind(s);
  if (threads < 0) throw ConfigError("config: threads must be >= 0");
  double previous = tier_difficulty(domain, data.height, data.width, data.boxes);
  for (int size : curriculum_sizes) {
    const double d = tier_difficulty(domain, size, size, data.boxes);
    if (!(d > previous)) throw ConfigError("config: curriculum sizes must grow strictly past the training size");
    previous = d;
  }
}

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys{
      {"version", "config format version (1)"},
      {"domain", "sokoban | maze | floortile"},
      {"seed", "model initialisation and batch shuffling seed"},
      {"out_dir", "output directory (env COAT_OUT_DIR overrides)"},
      {"threads", "OpenMP threads, 0 = default (env COAT_THREADS overrides)"},
      {"data.height", "training grid height"},
      {"data.width", "training grid width"},
      {"data.boxes", "sokoban boxes"},
      {"data.pull_steps", "sokoban reverse-walk length"},
      {"data.wall_density", "sokoban interior wall fraction"},
      {"data.teleport_pairs", "maze teleport pairs (0-4)"},
      {"data.extra_openings", "maze walls broken after carving, -1 = cells/10"},
      {"data.instances", "training instances"},
      {"data.seed", "seed of the first training instance"},
      {"data.validation_fraction", "share of instances held out for validation loss"},
      {"eval.sizes", "comma list of square evaluation sizes"},
      {"eval.instances", "instances per evaluation tier"},
      {"eval.seed", "seed of the first evaluation instance"},
      {"eval.rotations", "comma list of quarter turns applied to evaluation tiers"},
      {"eval.solvers", "comma list of coat, blind, oracle"},
      {"search.max_expansions", "evaluation expansion budget"},
      {"search.max_seconds", "evaluation time budget"},
      {"model.preset", "desk | paper"},
      {"model.head", "dual | single"},
      {"train.lr", "learning rate"},
      {"train.curriculum_lr", "fine-tuning learning rate"},
      {"train.epochs", "epochs of the initial training"},
      {"train.curriculum_epochs", "epochs per curriculum round"},
      {"train.batch_size", "batch size"},
      {"train.policy_weight", "weight of the policy loss"},
      {"train.max_steps", "Adam step cap, 0 = none"},
      {"curriculum.sizes", "comma list of square curriculum sizes, one round each"},
      {"curriculum.instances", "instances generated per round"},
      {"curriculum.seed", "seed of the first curriculum instance"},
      {"curriculum.max_expansions", "self-solving expansion budget"},
      {"curriculum.max_seconds", "self-solving time budget"},
  };
  return keys;
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig c) {
  std::map<std::string, std::string> fields;
  try {
    fields = parse_key_values(text, "config");
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [k, _] : fields)
    if (!config_keys().contains(k)) throw ConfigError("config: unknown key " + k);
  auto has = [&](const char* k) { return fields.contains(k); };
  auto str = [&](const char* k) { return fields.at(k); };
  if (has("version") && str("version") != std::to_string(kConfigFormatVersion))
    throw ConfigError("config: unsupported version " + str("version"));
  if (has("domain")) {
    try {
      c.domain = parse_domain_tag(str("domain"));
    } catch (const UsageError& e) {
      throw ConfigError(e.what());
    }
    const auto keep = c.data;
    c.data = GeneratorParams::for_domain(c.domain, keep.height, keep.width);
  }
  if (has("seed")) c.seed = number<std::uint64_t>("seed", str("seed"));
  if (has("out_dir")) c.out_dir = str("out_dir");
  if (has("threads")) c.threads = number<int>("threads", str("threads"));
  if (has("data.height")) c.data.height = number<int>("data.height", str("data.height"));
  if (has("data.width")) c.data.width = number<int>("data.width", str("data.width"));
  if (has("data.boxes")) c.data.boxes = number<int>("data.boxes", str("data.boxes"));
  if (has("data.pull_steps")) c.data.pull_steps = number<int>("data.pull_steps", str("data.pull_steps"));
  if (has("data.wall_density")) c.data.wall_density = number<double>("data.wall_density", str("data.wall_density"));
  if (has("data.teleport_pairs")) c.data.teleport_pairs = number<int>("data.teleport_pairs", str("data.teleport_pairs"));
  if (has("data.extra_openings")) c.data.extra_openings = number<int>("data.extra_openings", str("data.extra_openings"));
  if (has("data.instances")) c.data_instances = number<std::size_t>("data.instances", str("data.instances"));
  if (has("data.seed")) c.data_seed = number<std::uint64_t>("data.seed", str("data.seed"));
  if (has("data.validation_fraction"))
    c.validation_fraction = number<double>("data.validation_fraction", str("data.validation_fraction"));
  if (has("eval.sizes")) c.eval_sizes = int_list("eval.sizes", str("eval.sizes"));
  if (has("eval.instances")) c.eval_instances = number<std::size_t>("eval.instances", str("eval.instances"));
  if (has("eval.seed")) c.eval_seed = number<std::uint64_t>("eval.seed", str("eval.seed"));
  if (has("eval.rotations")) c.eval_rotations = int_list("eval.rotations", str("eval.rotations"));
  if (has("eval.solvers")) c.eval_solvers = word_list(str("eval.solvers"));
  if (has("search.max_expansions"))
    c.budget.max_expansions = number<std::size_t>("search.max_expansions", str("search.max_expansions"));
  if (has("search.max_seconds")) c.budget.max_seconds = number<double>("search.max_seconds", str("search.max_seconds"));
  if (has("model.preset")) {
    if (str("model.preset") != "desk" && str("model.preset") != "paper")
      throw ConfigError("config: model.preset is desk or paper");
    c.paper_model = str("model.preset") == "paper";
  }
  if (has("model.head")) {
    try {
      c.head = parse_head_mode(str("model.head"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (has("train.lr")) c.train.learning_rate = number<double>("train.lr", str("train.lr"));
  if (has("train.curriculum_lr"))
    c.train.curriculum_learning_rate = number<double>("train.curriculum_lr", str("train.curriculum_lr"));
  if (has("train.epochs")) c.train.epochs = number<std::size_t>("train.epochs", str("train.epochs"));
  if (has("train.curriculum_epochs"))
    c.train.curriculum_epochs = number<std::size_t>("train.curriculum_epochs", str("train.curriculum_epochs"));
  if (has("train.batch_size")) c.train.batch_size = number<std::size_t>("train.batch_size", str("train.batch_size"));
  if (has("train.policy_weight")) c.train.policy_weight = number<double>("train.policy_weight", str("train.policy_weight"));
  if (has("train.max_steps")) c.train.max_steps = number<std::size_t>("train.max_steps", str("train.max_steps"));
  if (has("curriculum.sizes")) c.curriculum_sizes = int_list("curriculum.sizes", str("curriculum.sizes"));
  if (has("curriculum.instances"))
    c.curriculum_instances = number<std::size_t>("curriculum.instances", str("curriculum.instances"));
  if (has("curriculum.seed")) c.curriculum_seed = number<std::uint64_t>("curriculum.seed", str("curriculum.seed"));
  if (has("curriculum.max_expansions"))
    c.curriculum_budget.max_expansions =
        number<std::size_t>("curriculum.max_expansions", str("curriculum.max_expansions"));
  if (has("curriculum.max_seconds"))
    c.curriculum_budget.max_seconds = number<double>("curriculum.max_seconds", str("curriculum.max_seconds"));
  c.train.seed = c.seed;
  c.validate();
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  std::map<std::string, std::string> f{
      {"version", std::to_string(kConfigFormatVersion)},
      {"domain", to_string(c.domain)},
      {"seed", std::to_string(c.seed)},
      {"out_dir", c.out_dir},
      {"threads", std::to_string(c.threads)},
      {"data.height", std::to_string(c.data.height)},
      {"data.width", std::to_string(c.data.width)},
      {"data.boxes", std::to_string(c.data.boxes)},
      {"data.pull_steps", std::to_string(c.data.pull_steps)},
      {"data.wall_density", real(c.data.wall_density)},
      {"data.teleport_pairs", std::to_string(c.data.teleport_pairs)},
      {"data.extra_openings", std::to_string(c.data.extra_openings)},
      {"data.instances", std::to_string(c.data_instances)},
      {"data.seed", std::to_string(c.data_seed)},
      {"data.validation_fraction", real(c.validation_fraction)},
      {"eval.sizes", join(c.eval_sizes)},
      {"eval.instances", std::to_string(c.eval_instances)},
      {"eval.seed", std::to_string(c.eval_seed)},
      {"eval.rotations", join(c.eval_rotations)},
      {"eval.solvers", join(c.eval_solvers)},
      {"search.max_expansions", std::to_string(c.budget.max_expansions)},
      {"search.max_seconds", real(c.budget.max_seconds)},
      {"model.preset", c.paper_model ? "paper" : "desk"},
      {"model.head", to_string(c.head)},
      {"train.lr", real(c.train.learning_rate)},
      {"train.curriculum_lr", real(c.train.curriculum_learning_rate)},
      {"train.epochs", std::to_string(c.train.epochs)},
      {"train.curriculum_epochs", std::to_string(c.train.curriculum_epochs)},
      {"train.batch_size", std::to_string(c.train.batch_size)},
      {"train.policy_weight", real(c.train.policy_weight)},
      {"train.max_steps", std::to_string(c.train.max_steps)},
      {"curriculum.sizes", join(c.curriculum_sizes)},
      {"curriculum.instances", std::to_string(c.curriculum_instances)},
      {"curriculum.seed", std::to_string(c.curriculum_seed)},
      {"curriculum.max_expansions", std::to_string(c.curriculum_budget.max_expansions)},
      {"curriculum.max_seconds", real(c.curriculum_budget.max_seconds)},
  };
  std::string out;
  for (const auto& [k, v] : f) out += k + "=" + v + "\n";
  return out;
}

void apply_environment(ExperimentConfig& c) {
  if (const char* dir = std::getenv("COAT_OUT_DIR"); dir && *dir) c.out_dir = dir;
  if (const char* t = std::getenv("COAT_THREADS"); t && *t) {
    c.threads = number<int>("COAT_THREADS", t);
    if (c.threads < 0) throw ConfigError("COAT_THREADS must be >= 0");
  }
}

ExperimentConfig desk_preset(DomainTag domain) {
  ExperimentConfig c;
  c.domain = domain;
  switch (domain) {
    case DomainTag::maze:
      c.data = GeneratorParams::for_domain(domain, 6, 6);
      c.data.teleport_pairs = 1;
      c.data_instances = 280;  // ~2000 samples
      c.eval_sizes = {6, 8, 10};
      c.eval_rotations = {0, 1, 2, 3};
      c.curriculum_sizes = {8, 10};
      break;
    case DomainTag::sokoban:
      c.data = GeneratorParams::for_domain(domain, 7, 7);
      c.data.boxes = 2;
      c.eval_sizes = {7};
      break;
    case DomainTag::floortile:
      c.data = GeneratorParams::for_domain(domain, 3, 3);
      c.eval_sizes = {3};
      break;
  }
  return c;
}

}  // namespace coat
