// Copyright 2026 The textrl Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "textrl/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "textrl/agent/trainer.hpp"
#include "textrl/baselines/readability.hpp"
#include "textrl/cli/run_config.hpp"
#include "textrl/errors.hpp"
#include "textrl/eval/corpus.hpp"
#include "textrl/eval/evaluate.hpp"
#include "textrl/eval/synthetic.hpp"
#include "textrl/numeric/checkpoint.hpp"
#include "textrl/text/tokenizer.hpp"

namespace textrl {
namespace fs = std::filesystem;
namespace {

constexpr const char* kCheckpointFile = "checkpoint.bin";
constexpr const char* kLogFile = "training_log.csv";
constexpr const char* kConfigFile = "config.txt";
constexpr const char* kPerTextFile = "per_text.csv";
constexpr const char* kMetricsFile = "metrics.json";

// Flags that map one-to-one onto configuration keys.
struct ConfigFlag {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr ConfigFlag kConfigFlags[] = {
    {"--corpus", "corpus", "corpus directory (one subdirectory per level) or label,text CSV"},
    {"--embeddings", "embeddings", "word vectors, one 'token v1 ... vD' line each"},
    {"--ngrams", "ngrams", "n-gram counts TSV: n<TAB>words<TAB>count"},
    {"--wordlist", "wordlist", "easy-word list for Dale-Chall, one word per line"},
    {"--checkpoint", "checkpoint", "checkpoint to read (default <out>/checkpoint.bin)"},
    {"--out", "out", "output directory"},
    {"--episodes", "episodes", "training episodes"},
    {"--seed", "seed", "random seed"},
    {"--move-penalty", "move_penalty", "reward for each move action"},
    {"--correct-reward", "correct_reward", "reward for a correct classification"},
    {"--incorrect-penalty", "incorrect_penalty", "reward for a wrong or missing classification"},
    {"--max-moves", "max_moves", "moves before an episode ends undecided"},
    {"--epsilon-final", "epsilon_final", "exploration rate after annealing"},
    {"--target-mode", "target_mode", "bootstrap target: double or vanilla"},
    {"--dueling-mode", "dueling_mode", "stream aggregation: mean or sum"},
    {"--format", "format", "report format: table or json"},
    {"--jobs", "jobs", "evaluation threads (0 = all available)"},
};

// Collects config-file and flag values; flags win regardless of order.
class ConfigOptions {
 public:
  void Attach(CLI::App& app) {
    app.add_option("--config", config_file_, "key = value configuration file");
    app.add_flag("--print-config", print_config_, "print the resolved configuration and exit");
    app.add_option("--set", overrides_, "override any configuration key: key=value");
    for (const auto& f : kConfigFlags) {
      app.add_option(f.flag, flags_[f.key], f.help);
    }
  }

  RunConfig Resolve() const {
    RunConfig config;
    if (!config_file_.empty()) LoadRunConfig(config_file_, config);
    for (const auto& [key, value] : flags_) {
      if (value) ApplyConfigValue(config, key, *value);
    }
    for (const auto& kv : overrides_) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
      ApplyConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return config;
  }

  bool print_config() const { return print_config_; }

 private:
  std::string config_file_;
  bool print_config_ = false;
  std::vector<std::string> overrides_;
  std::map<std::string, std::optional<std::string>> flags_;
};

void Require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required ") + flag);
}

struct Resources {
  EmbeddingTable embeddings;
  NgramModel ngrams;
};

Resources LoadResources(const RunConfig& config) {
  Require(config.embeddings, "--embeddings");
  Require(config.ngrams, "--ngrams");
  return {LoadEmbeddings(config.embeddings), LoadNgrams(config.ngrams)};
}

CorpusSplit LoadSplit(const RunConfig& config, std::ostream& err) {
  Require(config.corpus, "--corpus");
  Corpus corpus = LoadCorpus(config.corpus);
  CorpusSplit split = SplitCorpus(corpus, config.split_fraction, config.seed);
  for (const auto& w : split.warnings) err << "warning: " << w << '\n';
  return split;
}

fs::path CheckpointPath(const RunConfig& config) {
  return config.checkpoint.empty() ? fs::path(config.out) / kCheckpointFile
                                   : fs::path(config.checkpoint);
}

QNetwork MakeNetwork(const RunConfig& config, int classes) {
  const ActionSpace actions(classes, config.hyper.allow_backward);
  return QNetwork(QNetworkConfig{classes, actions.move_actions(), config.hyper.dueling});
}

// Builds a network shaped for `classes` (or for whatever the checkpoint holds
// when classes is 0) and loads its parameters.
QNetwork LoadNetwork(const RunConfig& config, int classes) {
  const fs::path path = CheckpointPath(config);
  const std::vector<NamedTensor> tensors = LoadCheckpoint(path);
  if (classes == 0) {
    const int moves = config.hyper.allow_backward ? 2 : 1;
    for (const auto& t : tensors) {
      if (t.name == "advantage_out.bias") classes = static_cast<int>(t.tensor.size()) - moves;
    }
    if (classes < 2) throw ParseError(path.string(), 0, "checkpoint has no usable advantage head");
  }
  QNetwork net = MakeNetwork(config, classes);
  RestoreParameters(net.Parameters(), tensors);
  return net;
}

template <typename Write>
void WriteFile(const fs::path& path, Write&& write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path.string());
  write(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string ReadText(const std::optional<std::string>& text, const std::optional<std::string>& file) {
  if (text && file) throw UsageError("give either --text or --file, not both");
  if (text) return *text;
  if (!file) throw UsageError("missing required --text or --file");
  std::ifstream in(*file, std::ios::binary);
  if (!in) throw UsageError("cannot open " + *file);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int CmdTrain(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Resources res = LoadResources(config);
  const CorpusSplit split = LoadSplit(config, err);
  const FeaturizedCorpus train = FeaturizeCorpus(split.train, res.embeddings, res.ngrams);
  if (train.size() == 0) throw UsageError("training split is empty");

  const fs::path dir(config.out);
  fs::create_directories(dir);
  WriteFile(dir / kConfigFile, [&](std::ostream& o) { WriteRunConfig(o, config); });

  Trainer trainer(config.hyper, config.rewards, train.classes, config.seed);
  std::ofstream log(dir / kLogFile, std::ios::binary);
  if (!log) throw UsageError("cannot write " + (dir / kLogFile).string());
  WriteTrainingLogHeader(log);
  const std::size_t total = config.hyper.training_episodes;
  const std::size_t every = std::max<std::size_t>(1, total / 20);
  double reward_window = 0.0;
  try {
    trainer.Train(train, [&](const EpisodeLog& rec) {
      WriteTrainingLogRecord(log, rec);
      reward_window += rec.total_reward;
      if ((rec.episode + 1) % every == 0) {
        err << "episode " << rec.episode + 1 << '/' << total << "  mean reward "
            << FormatDouble(reward_window / static_cast<double>(every)) << "  epsilon "
            << FormatDouble(rec.epsilon) << '\n';
        reward_window = 0.0;
      }
    });
  } catch (const TrainingDiverged& e) {
    const fs::path path = dir / kCheckpointFile;
    SaveCheckpoint(path, SnapshotParameters(trainer.target().Parameters()));
    err << "error: " << e.what() << "\nwrote last synchronized network to " << path.string()
        << '\n';
    return kExitFailure;
  }
  log.close();
  SaveCheckpoint(dir / kCheckpointFile, SnapshotParameters(trainer.main().Parameters()));
  out << "trained " << total << " episodes on " << train.size() << " texts\n"
      << "wrote " << (dir / kCheckpointFile).string() << ", " << (dir / kLogFile).string()
      << ", " << (dir / kConfigFile).string() << '\n';
  return kExitOk;
}

int CmdEvaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Resources res = LoadResources(config);
  CorpusSplit split = LoadSplit(config, err);
  Corpus& corpus = split.test;
  if (config.eval_split == "all") {
    corpus.texts.insert(corpus.texts.end(), split.train.texts.begin(), split.train.texts.end());
  }
  const FeaturizedCorpus test = FeaturizeCorpus(corpus, res.embeddings, res.ngrams);
  if (test.size() == 0) throw UsageError("evaluation split is empty");
  const QNetwork net = LoadNetwork(config, test.classes);
  const Evaluation eval =
      EvaluatePolicy(net, test, config.rewards, config.hyper.allow_backward, config.jobs);

  if (config.format == ReportFormat::kJson) {
    WriteMetricsJson(out, eval.metrics);
  } else {
    WriteMetricsTable(out, eval.metrics);
  }
  const fs::path dir(config.out);
  fs::create_directories(dir);
  WriteFile(dir / kPerTextFile, [&](std::ostream& o) { WritePerTextCsv(o, eval.records); });
  WriteFile(dir / kMetricsFile, [&](std::ostream& o) { WriteMetricsJson(o, eval.metrics); });
  return kExitOk;
}

int CmdAssess(const RunConfig& config, const std::string& text, std::ostream& out) {
  const Resources res = LoadResources(config);
  const QNetwork net = LoadNetwork(config, 0);
  const int classes = net.config().classes;
  const TokenizedText tok = Tokenize(text);
  if (tok.tokens.empty()) throw UsageError("text has no tokens");
  const TokenFeatureSequence features = FeaturizeTokens(tok.tokens, res.embeddings, res.ngrams);
  const ActionSpace actions(classes, config.hyper.allow_backward);
  // The true level only affects rewards, which assess does not report.
  const EpisodeRecord rec = RunGreedyEpisode(net, features, 1, config.rewards, actions);

  const std::string predicted = rec.predicted ? std::to_string(*rec.predicted) : "UNDECIDED";
  if (config.format == ReportFormat::kJson) {
    nlohmann::ordered_json j;
    j["predicted"] = predicted;
    j["moves"] = rec.moves;
    j["words_seen"] = rec.words_seen;
    j["words_total"] = features.size();
    j["unknown_tokens"] = features.unknown_tokens;
    nlohmann::ordered_json q;
    for (std::size_t a = 0; a < rec.final_q.size(); ++a) {
      q[ToString(actions.FromIndex(a))] = rec.final_q[a];
    }
    j["q_values"] = q;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "predicted   " << predicted << '\n'
      << "moves       " << rec.moves << '\n'
      << "words_seen  " << rec.words_seen << " of " << features.size() << '\n'
      << "q_values (final step)\n";
  for (std::size_t a = 0; a < rec.final_q.size(); ++a) {
    out << "  " << ToString(actions.FromIndex(a)) << "  " << FormatDouble(rec.final_q[a]) << '\n';
  }
  return kExitOk;
}

std::string FormulaList() {
  std::string names;
  for (Formula f : kAllFormulas) names += (names.empty() ? "" : ", ") + FormulaName(f);
  return names;
}

struct BaselineArgs {
  std::string formula;
  bool all = false;
  std::optional<std::string> text, file;
  std::optional<std::size_t> words, sentences, syllables, complex_words, difficult_words;
};

int CmdBaseline(const RunConfig& config, const BaselineArgs& args, std::ostream& out,
                std::ostream& err) {
  std::vector<Formula> formulas;
  if (args.all) {
    formulas.assign(std::begin(kAllFormulas), std::end(kAllFormulas));
  } else {
    Formula f{};
    if (args.formula.empty()) throw UsageError("missing formula; valid names: " + FormulaList());
    if (!ParseFormula(args.formula, f)) {
      throw UsageError("unknown formula '" + args.formula + "'; valid names: " + FormulaList());
    }
    formulas.push_back(f);
  }

  TextStats stats;
  const bool from_counts = args.words || args.sentences || args.syllables ||
                           args.complex_words || args.difficult_words;
  if (from_counts) {
    if (args.text || args.file) throw UsageError("give either a text or counts, not both");
    if (!args.words || !args.sentences) throw UsageError("counts need --words and --sentences");
    stats.words = *args.words;
    stats.sentences = *args.sentences;
    stats.syllables = args.syllables.value_or(0);
    stats.complex_words = args.complex_words.value_or(0);
    stats.difficult_words = args.difficult_words.value_or(0);
  } else {
    const std::string text = ReadText(args.text, args.file);
    std::optional<WordList> easy;
    if (!config.wordlist.empty()) easy = LoadWordList(config.wordlist);
    const bool needs_list = std::find(formulas.begin(), formulas.end(), Formula::kDaleChall) !=
                            formulas.end();
    if (needs_list && !easy) {
      err << "warning: no --wordlist; every word counts as difficult for dale-chall\n";
    }
    stats = ComputeTextStats(text, easy ? &*easy : nullptr);
  }
  stats.Validate();

  if (config.format == ReportFormat::kJson) {
    nlohmann::ordered_json j;
    j["stats"] = {{"words", stats.words},
                  {"sentences", stats.sentences},
                  {"syllables", stats.syllables},
                  {"complex_words", stats.complex_words},
                  {"difficult_words", stats.difficult_words}};
    nlohmann::ordered_json scores;
    for (Formula f : formulas) scores[FormulaName(f)] = Score(f, stats);
    j["scores"] = scores;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "words            " << stats.words << '\n'
      << "sentences        " << stats.sentences << '\n'
      << "syllables        " << stats.syllables << '\n'
      << "complex_words    " << stats.complex_words << '\n'
      << "difficult_words  " << stats.difficult_words << '\n';
  for (Formula f : formulas) {
    std::string name = FormulaName(f);
    name.resize(17, ' ');
    out << name << FormatDouble(Score(f, stats)) << '\n';
  }
  return kExitOk;
}

int CmdGenerate(const RunConfig& config, const SyntheticOptions& options, std::ostream& out) {
  SyntheticOptions opt = options;
  opt.seed = config.seed;
  const SyntheticData data = GenerateSyntheticCorpus(opt);
  WriteSyntheticData(data, config.out);
  out << "generated " << data.corpus.size() << " texts in " << opt.classes << " levels\n"
      << "wrote " << (fs::path(config.out) / "corpus.csv").string() << ", "
      << (fs::path(config.out) / "embeddings.txt").string() << ", "
      << (fs::path(config.out) / "ngrams.tsv").string() << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Readability assessment with a deep recurrent Q-learning agent", "textrl");
  app.require_subcommand(1);

  ConfigOptions train_opts, eval_opts, assess_opts, baseline_opts, generate_opts;
  CLI::App* train = app.add_subcommand("train", "train an agent and write a checkpoint");
  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on the test split");
  CLI::App* assess = app.add_subcommand("assess", "classify one text with a checkpoint");
  CLI::App* baseline = app.add_subcommand("baseline", "score a text with readability formulas");
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic corpus with resources");
  train_opts.Attach(*train);
  eval_opts.Attach(*evaluate);
  assess_opts.Attach(*assess);
  baseline_opts.Attach(*baseline);
  generate_opts.Attach(*generate);

  std::optional<std::string> assess_text, assess_file;
  assess->add_option("--text", assess_text, "text to classify");
  assess->add_option("--file", assess_file, "file holding the text to classify");

  BaselineArgs base;
  baseline->add_option("formula,--formula", base.formula, "formula: " + FormulaList());
  baseline->add_flag("--all", base.all, "print all four formulas");
  baseline->add_option("--text", base.text, "text to score");
  baseline->add_option("--file", base.file, "file holding the text to score");
  baseline->add_option("--words", base.words, "word count (instead of a text)");
  baseline->add_option("--sentences", base.sentences, "sentence count");
  baseline->add_option("--syllables", base.syllables, "syllable count");
  baseline->add_option("--complex-words", base.complex_words, "words of 3+ syllables");
  baseline->add_option("--difficult-words", base.difficult_words, "words not on the easy list");

  SyntheticOptions synth;
  generate->add_option("--classes", synth.classes, "number of levels")->capture_default_str();
  generate->add_option("--texts-per-class", synth.texts_per_class, "texts per level")
      ->capture_default_str();
  generate->add_option("--min-length", synth.min_length, "minimum tokens per text")
      ->capture_default_str();
  generate->add_option("--max-length", synth.max_length, "maximum tokens per text")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const std::pair<CLI::App*, ConfigOptions*> commands[] = {
      {train, &train_opts},       {evaluate, &eval_opts},        {assess, &assess_opts},
      {baseline, &baseline_opts}, {generate, &generate_opts}};
  try {
    for (const auto& [cmd, opts] : commands) {
      if (!cmd->parsed()) continue;
      const RunConfig config = opts->Resolve();
      if (opts->print_config()) {
        WriteRunConfig(out, config);
        return kExitOk;
      }
      if (cmd == train) return CmdTrain(config, out, err);
      if (cmd == evaluate) return CmdEvaluate(config, out, err);
      if (cmd == assess) return CmdAssess(config, ReadText(assess_text, assess_file), out);
      if (cmd == baseline) return CmdBaseline(config, base, out, err);
      return CmdGenerate(config, synth, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace textrl
