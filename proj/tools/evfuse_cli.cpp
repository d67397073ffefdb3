// evfuse: batch fusion, evaluation, simulation and frame selection over
// line-delimited logit records.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "evfuse/commands.hpp"
#include "evfuse/error.hpp"

namespace {

using evfuse::Modality;
using evfuse::ModalityProfile;

struct Flags {
  std::string mode = "advanced";
  std::string order = "audio,video,text";
  std::string taxonomy;
  std::vector<std::string> inputs;
  std::string output = "-";
  bool fail_fast = false;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::size_t stride = evfuse::kDefaultFrameStride;
  std::string format = "tabular";
  bool exclude_unseen = false;

  // simulate
  std::size_t records = 100;
  std::string modalities = "audio,video,text";
  std::vector<std::string> signal, noise, offset, neutral_bias, dropout, disagreement;
  double unseen_rate = 0.0;
  std::string unseen_label = "contempt";
  std::string id_prefix = "sim";
  bool no_labels = false;
};

std::vector<Modality> parse_modality_list(const std::string& text) {
  std::vector<Modality> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(Modality::parse(item));
  }
  return out;
}

// Each entry is either "value" (every modality) or "modality=value".
void apply_knob(const std::vector<std::string>& entries,
                std::map<Modality, ModalityProfile>& profiles,
                double ModalityProfile::*field, const std::string& flag) {
  for (const std::string& entry : entries) {
    const auto eq = entry.find('=');
    const std::string value = eq == std::string::npos ? entry : entry.substr(eq + 1);
    double v;
    try {
      std::size_t used = 0;
      v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw evfuse::Error(evfuse::ErrorKind::kInvalidArgument,
                          "--" + flag + ": bad number '" + value + "'");
    }
    if (eq == std::string::npos) {
      for (auto& [m, p] : profiles) p.*field = v;
      continue;
    }
    auto it = profiles.find(Modality::parse(entry.substr(0, eq)));
    if (it == profiles.end()) {
      throw evfuse::Error(evfuse::ErrorKind::kInvalidArgument,
                          "--" + flag + ": modality '" + entry.substr(0, eq) +
                              "' is not simulated");
    }
    it->second.*field = v;
  }
}

evfuse::RunConfig to_config(const Flags& f, bool evaluate) {
  evfuse::RunConfig c;
  if (evaluate && f.mode == "compare") {
    c.compare = true;
  } else {
    c.mode = evfuse::parse_mitigation(f.mode);
  }
  c.fusion_order = parse_modality_list(f.order);
  if (!f.taxonomy.empty()) c.taxonomy_path = f.taxonomy;
  c.inputs = f.inputs.empty() ? std::vector<std::string>{"-"} : f.inputs;
  c.output = f.output;
  c.fail_fast = f.fail_fast;
  c.seed = f.seed;
  c.workers = f.workers;
  c.stride = f.stride;
  c.format = evfuse::parse_report_format(f.format);
  c.exclude_unseen = f.exclude_unseen;

  auto& sim = c.simulation;
  sim.records = f.records;
  sim.profiles.clear();
  for (const Modality& m : parse_modality_list(f.modalities)) sim.profiles[m] = {};
  apply_knob(f.signal, sim.profiles, &ModalityProfile::signal, "signal");
  apply_knob(f.noise, sim.profiles, &ModalityProfile::noise, "noise");
  apply_knob(f.offset, sim.profiles, &ModalityProfile::offset, "offset");
  apply_knob(f.neutral_bias, sim.profiles, &ModalityProfile::neutral_bias, "neutral-bias");
  apply_knob(f.dropout, sim.profiles, &ModalityProfile::dropout, "dropout");
  apply_knob(f.disagreement, sim.profiles, &ModalityProfile::disagreement, "disagreement");
  sim.unseen_rate = f.unseen_rate;
  sim.unseen_label = f.unseen_label;
  sim.id_prefix = f.id_prefix;
  sim.with_labels = !f.no_labels;
  evfuse::validate_config(c);
  return c;
}

int run(const std::string& command, const Flags& flags) {
  const evfuse::RunConfig config = to_config(flags, command == "evaluate");
  const evfuse::LabelTaxonomy taxonomy = config.taxonomy_path
                                             ? evfuse::LabelTaxonomy::load(*config.taxonomy_path)
                                             : evfuse::LabelTaxonomy::default_taxonomy();

  std::vector<std::unique_ptr<std::ifstream>> files;
  std::vector<evfuse::Input> inputs;
  for (const std::string& path : config.inputs) {
    if (path == "-") {
      inputs.push_back({"<stdin>", &std::cin});
      continue;
    }
    files.push_back(std::make_unique<std::ifstream>(path));
    if (!*files.back()) {
      throw evfuse::Error(evfuse::ErrorKind::kIo, "cannot open '" + path + "'");
    }
    inputs.push_back({path, files.back().get()});
  }

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (config.output != "-") {
    file_out.open(config.output, std::ios::binary);
    if (!file_out) throw evfuse::Error(evfuse::ErrorKind::kIo, "cannot open '" + config.output + "'");
    out = &file_out;
  }

  int status = evfuse::kExitUsage;
  if (command == "fuse") {
    status = evfuse::cmd_fuse(config, taxonomy, inputs, *out, std::cerr);
  } else if (command == "evaluate") {
    status = evfuse::cmd_evaluate(config, taxonomy, inputs, *out, std::cerr);
  } else if (command == "simulate") {
    status = evfuse::cmd_simulate(config, taxonomy, *out, std::cerr);
  } else if (command == "select-frame") {
    status = evfuse::cmd_select_frame(config, inputs, *out, std::cerr);
  }
  out->flush();
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evidential multimodal fusion over per-modality logits"};
  app.require_subcommand(1);
  Flags flags;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--taxonomy", flags.taxonomy, "Taxonomy/alias configuration file");
    sub->add_option("--out", flags.output, "Output path ('-' for stdout)");
    sub->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--fail-fast", flags.fail_fast, "Abort with status 1 on the first diagnostic");
  };
  auto reading = [&](CLI::App* sub) {
    common(sub);
    sub->add_option("--in", flags.inputs, "Input path(s), '-' for stdin (default)");
  };
  auto fusing = [&](CLI::App* sub) {
    reading(sub);
    sub->add_option("--order", flags.order, "Fusion order, comma separated");
  };

  auto* fuse = app.add_subcommand("fuse", "Fuse each record and print probabilities");
  fusing(fuse);
  fuse->add_option("--mode", flags.mode, "basic | advanced")->check(CLI::IsMember({"basic", "advanced"}));

  auto* evaluate = app.add_subcommand("evaluate", "Fuse labelled records and report accuracy");
  fusing(evaluate);
  evaluate->add_option("--mode", flags.mode, "basic | advanced | compare")
      ->check(CLI::IsMember({"basic", "advanced", "compare"}));
  evaluate->add_option("--format", flags.format, "tabular | structured")
      ->check(CLI::IsMember({"tabular", "structured", "json"}));
  evaluate->add_flag("--exclude-unseen", flags.exclude_unseen,
                     "Drop unseen-truth records from accuracy denominators");

  auto* simulate = app.add_subcommand("simulate", "Generate synthetic logit records");
  common(simulate);
  simulate->add_option("--seed", flags.seed, "RNG seed")->required();
  simulate->add_option("--records,-n", flags.records, "Number of records");
  simulate->add_option("--modalities", flags.modalities, "Simulated modalities, comma separated");
  simulate->add_option("--signal", flags.signal, "[modality=]shift added to the target class");
  simulate->add_option("--noise", flags.noise, "[modality=]noise standard deviation");
  simulate->add_option("--offset", flags.offset, "[modality=]constant added to every logit");
  simulate->add_option("--neutral-bias", flags.neutral_bias, "[modality=]shift added to neutral");
  simulate->add_option("--dropout", flags.dropout, "[modality=]probability of absence");
  simulate->add_option("--disagreement", flags.disagreement,
                       "[modality=]probability of favouring a wrong class");
  simulate->add_option("--unseen-rate", flags.unseen_rate, "Fraction of unseen-label records");
  simulate->add_option("--unseen-label", flags.unseen_label, "Label used for unseen records");
  simulate->add_option("--id-prefix", flags.id_prefix, "Record id prefix");
  simulate->add_flag("--no-labels", flags.no_labels, "Omit ground-truth labels");

  auto* select = app.add_subcommand("select-frame", "Pick the most salient frame per sequence");
  reading(select);
  select->add_option("--stride", flags.stride, "Keep every T-th frame")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? evfuse::kExitOk : evfuse::kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const evfuse::Error& e) {
    std::cerr << "evfuse " << command << ": " << e.what() << '\n';
    const bool usage = e.kind() == evfuse::ErrorKind::kInvalidArgument;
    return usage ? evfuse::kExitUsage : evfuse::kExitValidation;
  }
}
