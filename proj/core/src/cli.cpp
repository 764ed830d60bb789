// Copyright 2026 vidlang authors
// Command-line front end over the core library. Training settings follow
// defaults < --config file < explicit flags; every subcommand writes a
// deterministic run_log.json (config snapshot, seed, metrics, no
// timestamps) next to its outputs and nothing outside them.
//
// Licensed under the Apache License, Version 2.0

#include "vidlang/cli.hpp"

#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "config_json.hpp"
#include "json.hpp"
#include "vidlang/checkpoint.hpp"
#include "vidlang/errors.hpp"
#include "vidlang/manifest.hpp"
#include "vidlang/model.hpp"
#include "vidlang/pipeline.hpp"
#include "vidlang/run_config.hpp"
#include "vidlang/synthetic.hpp"
#include "vidlang/tokenizer.hpp"
#include "vidlang/trainer.hpp"
#include "vidlang/weights_io.hpp"
#include "vidlang/zeroshot.hpp"

namespace vidlang {
namespace {

namespace fs = std::filesystem;

// --- small helpers -----------------------------------------------------------

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

void write_json_file(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

// A manifest records its frame store relative to the manifest file (absolute
// paths pass through); an explicit --frames-root wins as given.
std::string resolve_frames_root(const std::string& flag_value,
                                const std::string& manifest_path,
                                const Manifest& manifest) {
  if (!flag_value.empty()) return flag_value;
  const fs::path stored = manifest.stats.frames_root.empty()
                              ? fs::path("frames")
                              : fs::path(manifest.stats.frames_root);
  return (fs::path(manifest_path).parent_path() / stored).string();
}

std::vector<int64_t> parse_k_list(const std::string& text) {
  std::vector<int64_t> ks;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    size_t pos = 0;
    int64_t k = 0;
    try {
      k = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size() || k < 1) {
      throw Error(ErrorCode::BadConfig,
                  "--frames expects comma-separated positive counts, got '" +
                      text + "'");
    }
    ks.push_back(k);
  }
  if (ks.empty()) {
    throw Error(ErrorCode::BadConfig, "--frames list is empty");
  }
  return ks;
}

// Kept, phase-labeled entries of the requested split ("all" or "" takes
// every split, including unsplit entries).
std::vector<ManifestEntry> select_eval_entries(const Manifest& manifest,
                                               const std::string& split) {
  std::vector<ManifestEntry> out;
  for (const auto& e : manifest.entries) {
    if (!e.kept() || e.phase_label.empty()) continue;
    if (!split.empty() && split != "all" && e.split != split) continue;
    out.push_back(e);
  }
  if (out.empty()) {
    throw Error(ErrorCode::NoData,
                "no kept labeled clips in split '" + split + "'");
  }
  return out;
}

nlohmann::json filters_to_json(const FilterConfig& f) {
  return nlohmann::json{
      {"min_unique", f.min_unique},
      {"max_rep_ratio", f.max_rep_ratio},
      {"min_ttr", f.min_ttr},
      {"clip_seconds", f.clip_seconds},
      {"min_tail_seconds", f.min_tail_seconds},
  };
}

nlohmann::json eval_result_to_json(const EvalResult& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : r.per_class) {
    per.push_back({{"label", c.label},
                   {"precision", c.precision},
                   {"recall", c.recall},
                   {"f1", c.f1},
                   {"support", c.support}});
  }
  return nlohmann::json{
      {"accuracy", r.accuracy}, {"macro_f1", r.macro_f1},
      {"k_frames", r.k_frames}, {"total", r.total},
      {"per_class", per},       {"confusion", r.confusion},
  };
}

// Loads the model and vocabulary a checkpoint describes, weights only (no
// optimizer state), for inference-side commands.
Model model_from_checkpoint(const std::string& path, Vocabulary* vocab) {
  const CheckpointState state = read_checkpoint_state(path);
  Model model(state.model_config, /*seed=*/0);
  import_weights(model, path);
  *vocab = Vocabulary::from_words(state.vocab_words);
  return model;
}

// --- per-subcommand argument bags ---------------------------------------------

struct PipelineArgs {
  std::string input;
  std::string out;  // manifest file path; run_log.json lands beside it
  std::string config;
  std::string endpoint;  // host:port[/path]
  std::string frames_root;
  bool stub_clients = false;
};

struct SynthArgs {
  SyntheticSpec spec;
  std::string out;
};

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::string config;
  std::string frames_root;
  std::string prompts;
  std::string resume;
  std::string loss_weights;  // "w0,w1,w2"; empty keeps current value
  int64_t max_epochs_this_run = -1;
};

struct EvalArgs {
  std::string checkpoint;
  std::string manifest;
  std::string prompts;
  std::string out;
  std::string split = "test";
  std::string frames_root;
  int64_t k = 4;                         // zeroshot
  std::string k_list = "1,4,8,16,32,45";  // ablate
};

// --- pipeline build ------------------------------------------------------------

void parse_endpoint(const std::string& text, std::string* host, int* port,
                    std::string* path) {
  std::string hostport = text;
  *path = "/caption";
  const size_t slash = text.find('/');
  if (slash != std::string::npos) {
    hostport = text.substr(0, slash);
    *path = text.substr(slash);
  }
  const size_t colon = hostport.rfind(':');
  size_t pos = 0;
  long parsed = 0;
  if (colon != std::string::npos && colon > 0 && colon + 1 < hostport.size()) {
    try {
      parsed = std::stol(hostport.substr(colon + 1), &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
  }
  if (pos == 0 || pos != hostport.size() - colon - 1 || parsed < 1 ||
      parsed > 65535) {
    throw Error(ErrorCode::BadConfig,
                "--caption-endpoint expects host:port[/path], got '" + text +
                    "'");
  }
  *host = hostport.substr(0, colon);
  *port = static_cast<int>(parsed);
}

int cmd_pipeline_build(const PipelineArgs& a) {
  PipelineConfig cfg;
  if (!a.config.empty()) load_filter_config(a.config, cfg.filters);

  const fs::path out_file(a.out);
  const fs::path out_dir =
      out_file.parent_path().empty() ? fs::path(".") : out_file.parent_path();

  // Record a frame store resolvable against the manifest's directory
  // (lexically, so nothing has to exist yet).
  std::string frames_root = a.frames_root;
  if (frames_root.empty()) {
    const fs::path store =
        fs::absolute(fs::path(a.input) / "frames").lexically_normal();
    const fs::path rel =
        store.lexically_relative(fs::absolute(out_dir).lexically_normal());
    frames_root = rel.empty() ? store.string() : rel.string();
  }
  cfg.frames_root = frames_root;

  const auto videos = read_sources((fs::path(a.input) / "sources.jsonl").string());
  FileAsrClient asr(a.input);
  std::unique_ptr<CaptionClient> captioner;
  if (!a.endpoint.empty() && !a.stub_clients) {
    std::string host, path;
    int port = 0;
    parse_endpoint(a.endpoint, &host, &port, &path);
    captioner = std::make_unique<HttpCaptionClient>(host, port, path);
  } else {
    captioner = std::make_unique<StubCaptionClient>();
  }

  const Manifest manifest = build_manifest(videos, asr, *captioner, cfg);
  fs::create_directories(out_dir);
  write_manifest(a.out, manifest);

  write_json_file(out_dir / "run_log.json",
                  nlohmann::json{
                      {"command", "pipeline build"},
                      {"version", kVersion},
                      {"input", a.input},
                      {"out", a.out},
                      {"frames_root", frames_root},
                      {"caption_client", captioner->name()},
                      {"filters", filters_to_json(cfg.filters)},
                      {"sources", static_cast<int64_t>(videos.size())},
                      {"kept", manifest.stats.kept},
                      {"dropped", manifest.stats.dropped},
                      {"kept_hours", manifest.stats.kept_hours},
                  });

  std::string drops;
  for (const auto& [reason, n] : manifest.stats.dropped) {
    drops += strf("  %s=%lld", reason.c_str(), static_cast<long long>(n));
  }
  std::cout << strf("[pipeline] sources %zu  kept %lld clips (%.2f h)",
                    videos.size(),
                    static_cast<long long>(manifest.stats.kept),
                    manifest.stats.kept_hours)
            << (drops.empty() ? "" : "  dropped:" + drops) << "\n"
            << "[pipeline] wrote " << a.out << "\n";
  return 0;
}

// --- synth build ----------------------------------------------------------------

int cmd_synth_build(const SynthArgs& a) {
  const Manifest manifest = build_synthetic_corpus(a.spec, a.out);

  write_json_file(fs::path(a.out) / "run_log.json",
                  nlohmann::json{
                      {"command", "synth build"},
                      {"version", kVersion},
                      {"out", a.out},
                      {"phases", a.spec.num_phases},
                      {"clips_per_phase", a.spec.clips_per_phase},
                      {"image_size", a.spec.image_size},
                      {"frames_per_clip", a.spec.frames_per_clip},
                      {"noise_level", a.spec.noise_level},
                      {"seed", a.spec.seed},
                      {"kept", manifest.stats.kept},
                      {"kept_hours", manifest.stats.kept_hours},
                  });

  std::cout << strf("[synth] wrote %lld clips (%lld phases x %lld) to %s\n",
                    static_cast<long long>(manifest.stats.kept),
                    static_cast<long long>(a.spec.num_phases),
                    static_cast<long long>(a.spec.clips_per_phase),
                    a.out.c_str());
  return 0;
}

// --- train ----------------------------------------------------------------------

int cmd_train(const TrainArgs& a, RunConfig& cfg) {
  if (!a.loss_weights.empty()) {
    apply_key_value(cfg, "loss_weights", a.loss_weights);
  }

  const Manifest manifest = read_manifest(a.manifest);

  TrainOptions opts;
  opts.frames_root = resolve_frames_root(a.frames_root, a.manifest, manifest);
  opts.out_dir = a.out;
  opts.resume_from = a.resume;
  opts.max_epochs_this_run = a.max_epochs_this_run;
  PromptBank bank;
  if (!a.prompts.empty()) {
    bank = load_prompt_bank(a.prompts);
    opts.val_prompts = &bank;
  }
  fs::create_directories(a.out);

  Model model(cfg.model, cfg.train.seed);
  const TrainResult result = train(model, manifest, cfg.train, opts);

  for (const auto& e : result.epochs) {
    std::string line = strf(
        "[train] epoch %lld  vtc %.4f  vtm %.4f  mlm %.4f  total %.4f  "
        "lr %.3e",
        static_cast<long long>(e.epoch), e.mean.vtc, e.mean.vtm, e.mean.mlm,
        e.mean.total, e.lr_last);
    if (e.val_accuracy >= 0.0) {
      line += strf("  val_acc %.4f", e.val_accuracy);
    }
    std::cout << line << "\n";
  }
  std::cout << strf("[train] done: %lld steps",
                    static_cast<long long>(result.steps));
  if (result.best_epoch >= 0) {
    std::cout << strf("  best val_acc %.4f (epoch %lld)", result.best_metric,
                      static_cast<long long>(result.best_epoch));
  }
  std::cout << "\n";

  write_json_file(fs::path(a.out) / "run_log.json",
                  nlohmann::json{
                      {"command", "train"},
                      {"version", kVersion},
                      {"manifest", a.manifest},
                      {"out", a.out},
                      {"frames_root", opts.frames_root},
                      {"prompts", a.prompts},
                      {"resume", a.resume},
                      {"model", model_config_to_json(cfg.model)},
                      {"train", train_config_to_json(cfg.train)},
                      {"steps", result.steps},
                      {"best_metric", result.best_metric},
                      {"best_epoch", result.best_epoch},
                      {"best_checkpoint", result.best_checkpoint},
                      {"last_checkpoint", result.last_checkpoint},
                  });
  return 0;
}

// --- eval -----------------------------------------------------------------------

int cmd_eval_zeroshot(const EvalArgs& a) {
  Vocabulary vocab = Vocabulary::from_words({});
  const Model model = model_from_checkpoint(a.checkpoint, &vocab);
  const Manifest manifest = read_manifest(a.manifest);
  const auto clips = select_eval_entries(manifest, a.split);
  const PromptBank bank = load_prompt_bank(a.prompts);
  const std::string frames_root =
      resolve_frames_root(a.frames_root, a.manifest, manifest);

  const EvalResult r = evaluate(model, vocab, clips, frames_root, bank, a.k);

  fs::create_directories(a.out);
  write_json_file(fs::path(a.out) / "eval.json", eval_result_to_json(r));
  write_json_file(fs::path(a.out) / "run_log.json",
                  nlohmann::json{
                      {"command", "eval zeroshot"},
                      {"version", kVersion},
                      {"checkpoint", a.checkpoint},
                      {"manifest", a.manifest},
                      {"prompts", a.prompts},
                      {"split", a.split},
                      {"frames_root", frames_root},
                      {"k", a.k},
                      {"accuracy", r.accuracy},
                      {"macro_f1", r.macro_f1},
                      {"total", r.total},
                  });

  std::cout << strf(
      "[eval] zeroshot accuracy %.4f  macro_f1 %.4f  clips %lld  k %lld\n",
      r.accuracy, r.macro_f1, static_cast<long long>(r.total),
      static_cast<long long>(a.k));
  return 0;
}

int cmd_eval_ablate(const EvalArgs& a) {
  const std::vector<int64_t> ks = parse_k_list(a.k_list);
  Vocabulary vocab = Vocabulary::from_words({});
  const Model model = model_from_checkpoint(a.checkpoint, &vocab);
  const Manifest manifest = read_manifest(a.manifest);
  const auto clips = select_eval_entries(manifest, a.split);
  const PromptBank bank = load_prompt_bank(a.prompts);
  const std::string frames_root =
      resolve_frames_root(a.frames_root, a.manifest, manifest);

  const auto results =
      frame_ablation(model, vocab, clips, frames_root, bank, ks);

  fs::create_directories(a.out);
  std::ofstream tsv(fs::path(a.out) / "ablation.tsv", std::ios::binary);
  tsv << "k\taccuracy\tmacro_f1\tn\n";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results) {
    tsv << strf("%lld\t%.6f\t%.6f\t%lld\n",
                static_cast<long long>(r.k_frames), r.accuracy, r.macro_f1,
                static_cast<long long>(r.total));
    rows.push_back(eval_result_to_json(r));
    std::cout << strf("[eval] ablate k %lld  accuracy %.4f  macro_f1 %.4f\n",
                      static_cast<long long>(r.k_frames), r.accuracy,
                      r.macro_f1);
  }
  if (!tsv) {
    throw Error(ErrorCode::IoError, "cannot write ablation.tsv");
  }
  tsv.close();

  write_json_file(fs::path(a.out) / "ablation.json",
                  nlohmann::json{{"k_list", ks}, {"results", rows}});
  write_json_file(fs::path(a.out) / "run_log.json",
                  nlohmann::json{
                      {"command", "eval ablate"},
                      {"version", kVersion},
                      {"checkpoint", a.checkpoint},
                      {"manifest", a.manifest},
                      {"prompts", a.prompts},
                      {"split", a.split},
                      {"frames_root", frames_root},
                      {"k_list", ks},
                      {"total", results.empty() ? 0 : results.front().total},
                  });
  return 0;
}

// --- app wiring -----------------------------------------------------------------

void add_train_flags(CLI::App* cmd, TrainArgs* a, RunConfig* cfg) {
  cmd->add_option("--manifest", a->manifest, "clip manifest to train on")
      ->required();
  cmd->add_option("--out", a->out,
                  "output directory (checkpoints, train_log.json)")
      ->required();
  cmd->add_option("--config", a->config, "key = value settings file");
  cmd->add_option("--frames-root", a->frames_root,
                  "frame store (default: manifest's recorded location)");
  cmd->add_option("--prompts", a->prompts,
                  "phase prompt bank enabling per-epoch validation");
  cmd->add_option("--resume", a->resume, "checkpoint to resume from");
  cmd->add_option("--max-epochs-this-run", a->max_epochs_this_run,
                  "stop after this many epochs (resume later)");

  CLI::App* m = cmd;  // model settings
  m->add_option("--image-size", cfg->model.image_size, "frame edge, pixels");
  m->add_option("--patch-size", cfg->model.patch_size, "patch edge, pixels");
  m->add_option("--embed-dim", cfg->model.embed_dim, "encoder width");
  m->add_option("--num-heads", cfg->model.num_heads, "attention heads");
  m->add_option("--num-layers-video", cfg->model.num_layers_video,
                "video encoder depth");
  m->add_option("--num-layers-text", cfg->model.num_layers_text,
                "text encoder depth");
  m->add_option("--num-fusion-layers", cfg->model.num_fusion_layers,
                "fused (cross-attention) layers");
  m->add_option("--vocab-size", cfg->model.vocab_size, "embedding rows");
  m->add_option("--max-frames", cfg->model.max_frames,
                "temporal position table size");
  m->add_option("--max-text-len", cfg->model.max_text_len,
                "token budget incl. specials");
  m->add_option("--proj-dim", cfg->model.proj_dim,
                "contrastive embedding size");

  CLI::App* t = cmd;  // optimization settings
  t->add_option("--base-lr", cfg->train.base_lr, "peak learning rate");
  t->add_option("--beta1", cfg->train.beta1, "Adam beta1");
  t->add_option("--beta2", cfg->train.beta2, "Adam beta2");
  t->add_option("--adam-eps", cfg->train.adam_eps, "Adam epsilon");
  t->add_option("--weight-decay", cfg->train.weight_decay,
                "decoupled weight decay");
  t->add_option("--warmup-epochs", cfg->train.warmup_epochs,
                "linear warmup epochs");
  t->add_option("--epochs", cfg->train.epochs, "total training epochs");
  t->add_option("--batch-size", cfg->train.batch_size, "pairs per step");
  t->add_option("--temperature", cfg->train.temperature,
                "contrastive temperature");
  t->add_option("--loss-weights", a->loss_weights,
                "w_vtc,w_vtm,w_mlm (comma-separated)");
  t->add_option("--mask-rate", cfg->train.mask_rate, "masking rate");
  t->add_option("--grad-clip", cfg->train.grad_clip,
                "global gradient-norm clip (<= 0 disables)");
  t->add_option("--min-lr", cfg->train.min_lr,
                "cosine floor (< 0 means base_lr / 100)");
  t->add_option("--frames-per-clip", cfg->train.frames_per_clip,
                "frames sampled per training clip");
  t->add_option("--seed", cfg->train.seed, "run seed (also seeds init)");
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  try {
    RunConfig cfg;
    // Settings file first, so flags parsed below override it. Only `train`
    // takes a RunConfig file; `pipeline build --config` is filter settings
    // and is read inside that command.
    if (!args.empty() && args[0] == "train") {
      for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
          load_run_config(args[i + 1], cfg);
          break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
          load_run_config(args[i].substr(9), cfg);
          break;
        }
      }
    }

    CLI::App app{"video-language pre-training toolkit", "vidlang"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    PipelineArgs pa;
    CLI::App* pipeline = app.add_subcommand("pipeline", "corpus curation");
    pipeline->require_subcommand(1);
    CLI::App* pipe_build = pipeline->add_subcommand(
        "build", "curate sources into a clip manifest");
    pipe_build->add_option("--input", pa.input,
                           "corpus root (sources.jsonl, transcripts, frames)")
        ->required();
    pipe_build->add_option("--out", pa.out, "manifest file to write")
        ->required();
    pipe_build->add_option("--config", pa.config,
                           "filter settings file (key = value)");
    pipe_build->add_flag("--stub-clients", pa.stub_clients,
                         "force the deterministic stub clients");
    pipe_build->add_option("--caption-endpoint", pa.endpoint,
                           "caption service, host:port[/path]");
    pipe_build->add_option("--frames-root", pa.frames_root,
                           "frame store to record in the manifest");

    SynthArgs sa;
    CLI::App* synth = app.add_subcommand("synth", "synthetic corpus");
    synth->require_subcommand(1);
    CLI::App* synth_build = synth->add_subcommand(
        "build", "generate a labeled synthetic corpus");
    synth_build->add_option("--out", sa.out, "corpus directory to create")
        ->required();
    synth_build->add_option("--phases", sa.spec.num_phases, "phase count");
    synth_build->add_option("--clips", sa.spec.clips_per_phase,
                            "clips per phase");
    synth_build->add_option("--image-size", sa.spec.image_size,
                            "frame edge, pixels");
    synth_build->add_option("--frames-per-clip", sa.spec.frames_per_clip,
                            "frames per clip (1/s)");
    synth_build->add_option("--noise", sa.spec.noise_level,
                            "pixel noise sigma");
    synth_build->add_option("--seed", sa.spec.seed, "corpus seed");

    TrainArgs ta;
    CLI::App* train_cmd =
        app.add_subcommand("train", "pre-train on a clip manifest");
    add_train_flags(train_cmd, &ta, &cfg);

    EvalArgs za;
    EvalArgs ba;
    CLI::App* eval = app.add_subcommand("eval", "zero-shot evaluation");
    eval->require_subcommand(1);
    CLI::App* zeroshot = eval->add_subcommand(
        "zeroshot", "zero-shot phase recognition on a split");
    zeroshot->add_option("--checkpoint", za.checkpoint, "trained checkpoint")
        ->required();
    zeroshot->add_option("--manifest", za.manifest, "labeled clip manifest")
        ->required();
    zeroshot->add_option("--prompts", za.prompts, "phase prompt bank (tsv)")
        ->required();
    zeroshot->add_option("--out", za.out, "output directory")->required();
    zeroshot->add_option("--frames", za.k, "frames sampled per clip");
    zeroshot->add_option("--split", za.split,
                         "manifest split to score ('all' for every clip)");
    zeroshot->add_option("--frames-root", za.frames_root,
                         "frame store (default: manifest's recorded location)");
    CLI::App* ablate = eval->add_subcommand(
        "ablate", "accuracy vs. sampled frame count");
    ablate->add_option("--checkpoint", ba.checkpoint, "trained checkpoint")
        ->required();
    ablate->add_option("--manifest", ba.manifest, "labeled clip manifest")
        ->required();
    ablate->add_option("--prompts", ba.prompts, "phase prompt bank (tsv)")
        ->required();
    ablate->add_option("--out", ba.out, "output directory")->required();
    ablate->add_option("--frames", ba.k_list,
                       "comma-separated frame counts to sweep");
    ablate->add_option("--split", ba.split,
                       "manifest split to score ('all' for every clip)");
    ablate->add_option("--frames-root", ba.frames_root,
                       "frame store (default: manifest's recorded location)");

    try {
      app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
      std::cout << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      std::cout << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      std::cout << kVersion << "\n";
      return 0;
    } catch (const CLI::ParseError& e) {
      std::cerr << "error: " << e.what() << "\n"
                << "run 'vidlang --help' for usage\n";
      return 2;
    }

    if (pipeline->got_subcommand(pipe_build)) return cmd_pipeline_build(pa);
    if (synth->got_subcommand(synth_build)) return cmd_synth_build(sa);
    if (app.got_subcommand(train_cmd)) return cmd_train(ta, cfg);
    if (eval->got_subcommand(zeroshot)) return cmd_eval_zeroshot(za);
    if (eval->got_subcommand(ablate)) return cmd_eval_ablate(ba);
    return 2;  // unreachable: require_subcommand guarantees a match
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<size_t>(argc) - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args);
}

}  // namespace vidlang
