// Copyright 2026 The Quixer Simulator Authors
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

// quixer: train, eval, verify and resources subcommands.
//
// Exit codes: 0 success, 1 usage or config error, 2 data error,
// 3 numeric failure (including failed verification properties).

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "quixer/checkpoint.hpp"
#include "quixer/config.hpp"
#include "quixer/errors.hpp"
#include "quixer/qsvt.hpp"
#include "quixer/resources.hpp"
#include "quixer/textdata.hpp"
#include "quixer/train.hpp"
#include "quixer/verify.hpp"

namespace fs = std::filesystem;
using namespace quixer;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string dashed(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

void write_json(const nlohmann::json& doc, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

TokenStream load_split(const Vocabulary& vocab, const std::string& path, Split split,
                       bool append_eos, bool strict) {
  const auto lines = read_lines(path);
  if (strict) {
    for (const auto& line : lines)
      for (const auto& tok : split_whitespace(line))
        if (!vocab.contains(tok)) {
          throw DataError("corpus '" + path + "' has token '" + tok +
                          "' outside the checkpoint vocabulary");
        }
  }
  return encode(vocab, lines, split, append_eos);
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
};

int cmd_train(const TrainArgs& args) {
  nlohmann::json doc = nlohmann::json::object();
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot read config '" + args.config_path + "'");
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config '" + args.config_path + "' is not valid JSON: " + e.what());
    }
  }
  for (const auto& [key, text] : args.overrides) apply_override(doc, key, text);
  RunConfig cfg = config_from_json(doc);
  cfg.validate();

  const auto train_lines = read_lines(cfg.train_path);
  const Vocabulary vocab = build_vocab(train_lines);
  const TokenStream train = encode(vocab, train_lines, Split::Train, cfg.append_eos);
  const TokenStream valid = load_split(vocab, cfg.valid_path, Split::Valid, cfg.append_eos, false);
  cfg.shape.vocab_size = vocab.size();

  const fs::path out_dir = cfg.output_dir;
  fs::create_directories(out_dir);
  write_json(config_to_json(cfg), out_dir / "config-echo.json");
  save_vocab(vocab, out_dir / "vocab.txt");

  const double unigram = unigram_perplexity(train, valid, vocab.size(), cfg.shape.window);
  std::printf("vocab %zu, train tokens %zu, valid tokens %zu, unigram valid ppl %.4f\n",
              vocab.size(), train.ids.size(), valid.ids.size(), unigram);
  std::fflush(stdout);

  const QuixerModel initial = init_model(cfg.shape, cfg.train.seed);
  TrainCallbacks cb;
  cb.on_epoch = [](const EpochMetrics& m) {
    std::printf("epoch %d  train_loss %.5f  valid_ppl %.4f  postsel mean %.5f [%.5f, %.5f]  lr %.3g  %.1fs\n",
                m.epoch, m.train_loss, m.valid_ppl, m.postselection_mean, m.postselection_min,
                m.postselection_max, m.lr, m.wall_seconds);
    std::fflush(stdout);
  };
  const TrainResult result = train_model(initial, train, valid, cfg.train, cb);
  write_metrics_csv(result.log, out_dir / "metrics.csv");

  Checkpoint ckpt{result.best_model, vocab.tokens(), nlohmann::json::object()};
  ckpt.meta["best_epoch"] = result.best_epoch;
  ckpt.meta["seed"] = cfg.train.seed;
  ckpt.meta["unigram_valid_ppl"] = unigram;
  if (result.best_epoch > 0) {
    ckpt.meta["best_valid_ppl"] =
        result.log.epochs[static_cast<std::size_t>(result.best_epoch - 1)].valid_ppl;
  }
  save_checkpoint(ckpt, out_dir / "model.ckpt");
  std::printf("best epoch %d; wrote %s\n", result.best_epoch, (out_dir / "model.ckpt").string().c_str());
  return 0;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint;
  std::string config_path;
  std::string split = "valid";
  std::string corpus;
  std::string output;
  int threads = 1;
  bool append_eos = true;
};

int cmd_eval(const EvalArgs& args) {
  const Checkpoint ckpt = load_checkpoint(args.checkpoint);
  const Vocabulary vocab(ckpt.vocab);
  std::string path = args.corpus;
  bool append_eos = args.append_eos;
  if (path.empty()) {
    if (args.config_path.empty()) throw ConfigError("eval needs --corpus or --config with --split");
    const RunConfig cfg = load_config(args.config_path);
    append_eos = cfg.append_eos;
    if (args.split == "train") path = cfg.train_path;
    else if (args.split == "valid") path = cfg.valid_path;
    else if (args.split == "test") path = cfg.test_path;
    else throw ConfigError("split must be train, valid or test");
    if (path.empty()) throw ConfigError("config has no path for split '" + args.split + "'");
  }
  const TokenStream stream = load_split(vocab, path, Split::Test, append_eos, true);
  const EvalResult ev = evaluate_perplexity(ckpt.model, stream, args.threads);

  const fs::path csv = args.output.empty() ? fs::path(args.checkpoint).parent_path() / "postselection.csv"
                                           : fs::path(args.output);
  std::ofstream out(csv);
  if (!out) throw DataError("cannot write '" + csv.string() + "'");
  out << "window,start,postselection,nll\n";
  const WindowView view = windows(stream, ckpt.model.shape.window, 1);
  char buf[96];
  for (std::size_t i = 0; i < ev.postselection.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", i, view[i].start, ev.postselection[i], ev.nll[i]);
    out << buf;
  }
  std::printf("corpus %s\nwindows %zu\nperplexity %.6f\nmean_nll %.9f\n", path.c_str(), ev.count,
              ev.perplexity, ev.mean_nll);
  std::printf("postselection mean %.6f min %.6f max %.6f\n", ev.postselection_mean,
              ev.postselection_min, ev.postselection_max);
  std::printf("polynomial sup norm on [-1,1] %.6f\n", polynomial_sup_norm(ckpt.model.mixer.poly, 2001));
  std::printf("wrote %s\n", csv.string().c_str());
  return 0;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const std::string& scale, std::uint64_t seed) {
  verify::Options opts;
  opts.scale = scale == "full" ? verify::Scale::Full : verify::Scale::Small;
  opts.seed = seed;
  bool ok = true;
  for (auto suite : {verify::block_encoding_suite, verify::polynomial_suite,
                     verify::postselection_identity_suite, verify::postselection_bound_suite,
                     verify::gradient_suite, verify::circuit_count_suite, verify::resource_suite,
                     verify::forward_oracle_suite, verify::invariance_suite}) {
    const verify::SuiteResult r = suite(opts);
    std::puts(verify::format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.passed;
  }
  std::puts(ok ? "all properties passed" : "some properties FAILED");
  return ok ? 0 : kExitNumeric;
}

// -------------------------------------------------------------- resources

int cmd_resources(const ResourceQuery& query) {
  const ResourceEstimate est = estimate(query);
  std::cout << format_table(query, est) << '\n' << to_json(query, est).dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quixer simulator: train, evaluate, verify and cost quantum transformer models"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a model from a JSON config plus overrides");
  train->add_option("--config", train_args.config_path, "JSON config file");
  for (const auto& key : config_keys()) {
    train->add_option_function<std::string>(
        "--" + dashed(key), [&train_args, key](const std::string& v) { train_args.overrides[key] = v; },
        "override '" + key + "'");
  }

  EvalArgs eval_args;
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "perplexity and postselection statistics of a checkpoint");
  eval->add_option("--checkpoint", eval_args.checkpoint, "checkpoint file")->required();
  eval->add_option("--config", eval_args.config_path, "config naming the split paths");
  eval->add_option("--split", eval_args.split, "train, valid or test")->capture_default_str();
  eval->add_option("--corpus", eval_args.corpus, "corpus file (instead of --config/--split)");
  eval->add_option("--output", eval_args.output, "postselection CSV (default: next to the checkpoint)");
  eval->add_option("--threads", eval_args.threads)->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "accepted for uniformity; evaluation is deterministic");
  eval->add_flag("!--no-eos", eval_args.append_eos, "do not append <eos> per line (with --corpus)");

  std::string scale = "small";
  std::uint64_t verify_seed = 0;
  auto* ver = app.add_subcommand("verify", "run the oracle property suites");
  ver->add_option("--scale", scale)->check(CLI::IsMember({"small", "full"}))->capture_default_str();
  ver->add_option("--seed", verify_seed)->capture_default_str();

  ResourceQuery query;
  std::uint64_t g = 0, prep = 0, res_seed = 0;
  auto* res = app.add_subcommand("resources", "fault-tolerant qubit and gate counts");
  res->add_option("-q", query.q, "data qubits")->check(CLI::PositiveNumber)->capture_default_str();
  res->add_option("-n", query.n, "tokens per context (>= 2)")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40))->capture_default_str();
  res->add_option("-l", query.l, "ansatz layers")->check(CLI::PositiveNumber)->capture_default_str();
  res->add_option("-d", query.d, "polynomial degree")->check(CLI::PositiveNumber)->capture_default_str();
  res->add_flag("--ancilla-select", query.use_ancilla_select, "use the ancilla-assisted select");
  res->add_option("--gates-per-token", g, "override g")->check(CLI::PositiveNumber);
  res->add_option("--prep-gates", prep, "gate cost of one PREP application");
  res->add_option("--select-multiplier", query.ancilla_select_multiplier,
                  "constant factor for the ancilla-assisted select")->check(CLI::PositiveNumber);
  res->add_option("--seed", res_seed, "accepted for uniformity; counts are deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return cmd_train(train_args);
    if (*eval) return cmd_eval(eval_args);
    if (*ver) return cmd_verify(scale, verify_seed);
    if (*res) {
      if (res->count("--gates-per-token")) query.g_override = g;
      if (res->count("--prep-gates")) query.prep_override = prep;
      return cmd_resources(query);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "invalid shape: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DegenerateStateError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
