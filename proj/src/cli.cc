// Copyright (c) 2026 The cvaug Authors. All Rights Reserved.
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

#include "cvaug/cli.h"

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "cvaug/augment.h"
#include "cvaug/backend.h"
#include "cvaug/config.h"
#include "cvaug/corpus.h"
#include "cvaug/embeddings.h"
#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/pairing.h"
#include "cvaug/parallel.h"
#include "cvaug/quality.h"
#include "cvaug/report.h"
#include "cvaug/scoring.h"
#include "cvaug/significance.h"
#include "cvaug/wav.h"

namespace cvaug {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Subcommand arguments must outlive parsing; run_cli keeps them here.
using Keep = std::vector<std::shared_ptr<void>>;

template <typename T>
T* hold(Keep& keep) {
  auto p = std::make_shared<T>();
  keep.push_back(p);
  return p.get();
}

// Options shared by every subcommand.
struct Globals {
  std::string config_path;
  bool dry_run = false;
  unsigned jobs = 0;
  std::optional<std::uint64_t> seed;
};

class Session {
 public:
  Session(const Globals& g, std::ostream& out) : g_(g), out_(out) {
    if (!g.config_path.empty()) {
      config_ = load_config(g.config_path);
    }
    apply_env_overrides(config_);
    if (g.seed) config_.seed = g.seed;
    validate_config(config_);
  }

  const RunConfig& config() const { return config_; }
  bool dry_run() const { return g_.dry_run; }
  std::ostream& out() { return out_; }

  unsigned workers() const {
    if (g_.jobs) return g_.jobs;
    if (config_.jobs) return config_.jobs;
    return default_workers();
  }

  // Writes `content` to `path`, or to stdout when path is empty. Under
  // --dry-run only the intent is printed.
  void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
      out_ << content;
    } else if (g_.dry_run) {
      out_ << "dry-run: would write " << path << " (" << content.size() << " bytes)\n";
    } else {
      write_text_file(path, content);
    }
  }

 private:
  Globals g_;
  RunConfig config_;
  std::ostream& out_;
};

PairExclusion make_eligibility(const std::string& rule, const std::vector<std::string>& manifests) {
  if (rule == "none") return no_exclusions();
  if (rule == "no-self") return exclude_self_pairs();
  std::vector<Corpus> corpora;
  for (const auto& m : manifests) corpora.push_back(load_manifest(m));
  if (corpora.empty()) {
    throw Error(ErrorKind::kUsage, "--eligibility " + rule + " needs --manifest for speaker metadata");
  }
  std::vector<const Corpus*> ptrs;
  for (const auto& c : corpora) ptrs.push_back(&c);
  SpeakerDirectory dir = make_speaker_directory(ptrs);
  if (rule == "monolingual") return monolingual_eligibility(std::move(dir));
  if (rule == "crosslingual") return crosslingual_eligibility(std::move(dir));
  throw Error(ErrorKind::kUsage, "unknown eligibility rule \"" + rule + "\"");
}

SimilarityMatrix matrix_from(const std::string& matrix_path, const std::string& src_emb,
                             const std::string& tgt_emb) {
  if (!matrix_path.empty()) {
    if (!src_emb.empty() || !tgt_emb.empty()) {
      throw Error(ErrorKind::kUsage, "give either --matrix or --source-embeddings/--target-embeddings");
    }
    return load_similarity_matrix(matrix_path);
  }
  if (src_emb.empty() || tgt_emb.empty()) {
    throw Error(ErrorKind::kUsage, "need --matrix or both --source-embeddings and --target-embeddings");
  }
  const auto s = load_embeddings(src_emb);
  const auto t = load_embeddings(tgt_emb);
  return build_similarity_matrix(s, t);
}

std::string stats_text(const Corpus& c, const CorpusStats& s) {
  std::string o;
  o += "corpus: " + c.name + "\n";
  o += "utterances: " + std::to_string(s.utterances) + "\n";
  o += "speakers: " + std::to_string(s.speakers) + "\n";
  o += "hours: " + fmt("%.1f", s.hours) + " (" + fmt("%.3f", s.hours * 3600.0) + " s)\n";
  for (const auto& [k, v] : s.hours_by_style) o += "hours.style." + k + ": " + fmt("%.1f", v) + "\n";
  for (const auto& [k, v] : s.hours_by_age_group)
    o += "hours.age_group." + k + ": " + fmt("%.1f", v) + "\n";
  for (const auto& [k, v] : s.hours_by_origin) o += "hours.origin." + k + ": " + fmt("%.1f", v) + "\n";
  for (const auto& [k, v] : s.speakers_by_age_group)
    o += "speakers.age_group." + k + ": " + std::to_string(v) + "\n";
  return o;
}

std::string stats_json(const Corpus& c, const CorpusStats& s) {
  json j;
  j["corpus"] = c.name;
  j["utterances"] = s.utterances;
  j["speakers"] = s.speakers;
  j["hours"] = s.hours;
  j["hours_by_style"] = s.hours_by_style;
  j["hours_by_age_group"] = s.hours_by_age_group;
  j["hours_by_origin"] = s.hours_by_origin;
  j["speakers_by_age_group"] = s.speakers_by_age_group;
  return j.dump(2) + "\n";
}

std::string plan_summary(const AugmentationPlan& plan, const Corpus& base, std::string_view kind) {
  const double base_hours = total_hours(base);
  std::string o;
  o += "plan: " + std::string(kind) + ", " + std::to_string(plan.jobs.size()) + " jobs, " +
       std::to_string(plan.excluded.size()) + " excluded utterances\n";
  o += "source hours: " + fmt("%.2f", base_hours) + "\n";
  o += "expected added hours: +" + fmt("%.2f", plan.expected_added_hours) + "\n";
  o += "augmented total hours: " + fmt("%.2f", base_hours + plan.expected_added_hours) + "\n";
  return o;
}

// Writes manifest + plan for an executed augmentation and reports failures.
void finish_augment(Session& s, const fs::path& out_dir, const AugmentationPlan& plan,
                    const ExecutionResult& result) {
  write_manifest(out_dir / "manifest.jsonl", result.corpus);
  write_text_file(out_dir / "plan.json", format_plan(plan));
  s.out() << "wrote " << (out_dir / "manifest.jsonl").string() << ": " << result.succeeded
          << " generated utterances, +" << fmt("%.2f", result.realized_added_hours)
          << " h (expected +" << fmt("%.2f", plan.expected_added_hours) << " h)\n";
  for (const auto& f : result.failures) {
    s.out() << "failed\t" << f.output_utterance_id << "\t" << f.message << "\n";
  }
  if (!result.failures.empty()) {
    throw Error(ErrorKind::kBackend, std::to_string(result.failures.size()) +
                                         " augmentation jobs failed; the manifest holds the rest");
  }
}

std::set<AgeGroup> parse_age_groups(const std::string& csv) {
  std::set<AgeGroup> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const std::string item = csv.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
    if (!item.empty()) out.insert(parse_age_group(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Corpus restrict_style(const Corpus& c, const std::string& style) {
  if (style.empty()) return c;
  CorpusFilter f;
  f.styles.insert(parse_style(style));
  return subset(c, f);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"cvaug: corpus augmentation toolkit for low-resource speech recognition", "cvaug"};
  app.require_subcommand(1);
  app.fallthrough();

  Keep keep;
  Globals g;
  app.add_option("--config", g.config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_flag("--dry-run", g.dry_run, "Print planned actions and hour deltas; write nothing");
  app.add_option("--jobs", g.jobs, "Worker threads (default: logical CPUs)")
      ->check(CLI::PositiveNumber);
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Global seed (overrides the config)");

  std::function<void(Session&)> action;
  auto bind = [&](CLI::App* sub, std::function<void(Session&)> fn) {
    sub->callback([&action, fn] { action = fn; });
  };

  // corpus ------------------------------------------------------------------
  auto* corpus = app.add_subcommand("corpus", "Manifest validation and statistics");
  corpus->require_subcommand(1);
  {
    auto* v = corpus->add_subcommand("validate", "Check a manifest against its invariants");
    struct ValidateArgs { std::string manifest; bool no_audio = false; };
    auto* o = hold<ValidateArgs>(keep);
    v->add_option("manifest", o->manifest, "Manifest (JSONL)")->required()->check(CLI::ExistingFile);
    v->add_flag("--no-audio", o->no_audio, "Skip WAV header checks");
    bind(v, [&, o](Session& s) {
      const Corpus c = load_manifest(o->manifest);
      ValidateOptions opts;
      opts.check_audio = !o->no_audio;
      const auto violations = validate(c, opts);
      for (const auto& x : violations) s.out() << "violation\t" << x.subject << "\t" << x.message << "\n";
      s.out() << c.name << ": " << c.records.size() << " utterances, " << c.speakers.size()
              << " speakers, " << violations.size() << " violations\n";
      if (!violations.empty()) {
        throw Error(ErrorKind::kValidation,
                    std::to_string(violations.size()) + " violations in " + o->manifest);
      }
    });
  }
  {
    auto* st = corpus->add_subcommand("stats", "Hours, speakers and styles of a manifest");
    struct StatsArgs { std::string manifest; std::string format = "text"; };
    auto* o = hold<StatsArgs>(keep);
    st->add_option("manifest", o->manifest, "Manifest (JSONL)")->required()->check(CLI::ExistingFile);
    st->add_option("--format", o->format, "text | json")->check(CLI::IsMember({"text", "json"}));
    bind(st, [&, o](Session& s) {
      const Corpus c = load_manifest(o->manifest);
      const CorpusStats stats = compute_stats(c);
      s.out() << (o->format == "json" ? stats_json(c, stats) : stats_text(c, stats));
    });
  }

  // embed -------------------------------------------------------------------
  auto* embed = app.add_subcommand("embed", "Speaker embeddings and similarity matrices");
  embed->require_subcommand(1);
  std::string emb_out, emb_against, emb_matrix;
  auto add_matrix_opts = [&](CLI::App* sub) {
    sub->add_option("-o,--output", emb_out, "Embedding file to write (JSONL)")->required();
    sub->add_option("--against", emb_against, "Target embeddings for a similarity matrix")
        ->check(CLI::ExistingFile);
    sub->add_option("--matrix", emb_matrix, "Where to write the similarity matrix (JSON)");
  };
  auto write_embedding_outputs = [&](Session& s, const std::vector<Embedding>& embs) {
    s.emit(emb_out, format_embeddings(embs));
    if (!emb_matrix.empty() && emb_against.empty()) {
      throw Error(ErrorKind::kUsage, "--matrix needs --against");
    }
    if (!emb_against.empty()) {
      const auto targets = load_embeddings(emb_against);
      const SimilarityMatrix m = build_similarity_matrix(embs, targets);
      if (emb_matrix.empty()) throw Error(ErrorKind::kUsage, "--against needs --matrix");
      s.emit(emb_matrix, format_similarity_matrix(m));
    }
  };
  {
    auto* c = embed->add_subcommand("compute", "Acoustic-summary embedding per speaker");
    struct ComputeArgs { std::string manifest; };
    auto* o = hold<ComputeArgs>(keep);
    c->add_option("manifest", o->manifest, "Manifest (JSONL)")->required()->check(CLI::ExistingFile);
    add_matrix_opts(c);
    bind(c, [&, o](Session& s) {
      const Corpus corpus = load_manifest(o->manifest);
      std::vector<std::string> speakers;
      std::map<std::string, std::vector<const UtteranceRecord*>> by_speaker;
      for (const auto& r : corpus.records) {
        if (!by_speaker.count(r.speaker_id)) speakers.push_back(r.speaker_id);
        by_speaker[r.speaker_id].push_back(&r);
      }
      if (s.dry_run()) {
        for (const auto& spk : speakers) {
          s.out() << "dry-run: embed " << spk << " from " << by_speaker[spk].size()
                  << " utterances\n";
        }
        s.emit(emb_out, "");
        return;
      }
      std::vector<Embedding> embs(speakers.size());
      parallel_for(speakers.size(), s.workers(), [&](std::size_t i) {
        std::vector<AudioBuffer> audio;
        for (const auto* r : by_speaker[speakers[i]]) {
          audio.push_back(read_wav(corpus.audio_file(*r), 16000));
        }
        embs[i] = acoustic_summary_embedding(speakers[i], audio);
      });
      write_embedding_outputs(s, embs);
      s.out() << "embedded " << embs.size() << " speakers\n";
    });
  }
  {
    auto* im = embed->add_subcommand("import", "Validate and canonicalize external embeddings");
    struct ImportArgs { std::string input; };
    auto* o = hold<ImportArgs>(keep);
    im->add_option("input", o->input, "Embedding file (JSONL)")->required()->check(CLI::ExistingFile);
    add_matrix_opts(im);
    bind(im, [&, o](Session& s) {
      const auto embs = load_embeddings(o->input);
      for (const auto& e : embs) check_embedding(e);
      write_embedding_outputs(s, embs);
      s.out() << "imported " << embs.size() << " speakers\n";
    });
  }

  // pairs -------------------------------------------------------------------
  auto* pairs = app.add_subcommand("pairs", "Source-target pair selection");
  pairs->require_subcommand(1);
  std::string p_matrix, p_src, p_tgt, p_elig = "none", p_out;
  std::vector<std::string> p_manifests;
  auto add_pair_inputs = [&](CLI::App* sub) {
    sub->add_option("--matrix", p_matrix, "Similarity matrix (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--source-embeddings", p_src, "Source embeddings (JSONL)")
        ->check(CLI::ExistingFile);
    sub->add_option("--target-embeddings", p_tgt, "Target embeddings (JSONL)")
        ->check(CLI::ExistingFile);
    sub->add_option("--eligibility", p_elig, "none | no-self | monolingual | crosslingual")
        ->check(CLI::IsMember({"none", "no-self", "monolingual", "crosslingual"}));
    sub->add_option("--manifest", p_manifests, "Manifests with speaker metadata")
        ->check(CLI::ExistingFile);
  };
  {
    auto* sel = pairs->add_subcommand("select", "Pick k targets per source speaker");
    struct SelectArgs { std::string strategy; std::size_t k = 0; };
    auto* o = hold<SelectArgs>(keep);
    add_pair_inputs(sel);
    sel->add_option("--strategy", o->strategy, "top | random | last (default: config)")
        ->check(CLI::IsMember({"top", "random", "last"}));
    sel->add_option("--k", o->k, "Targets per source (default: config)")->check(CLI::PositiveNumber);
    sel->add_option("-o,--output", p_out, "Pair file to write (default: stdout)");
    bind(sel, [&, o](Session& s) {
      const auto& cfg = s.config();
      const PairStrategy st = o->strategy.empty() ? cfg.pair_strategy : parse_pair_strategy(o->strategy);
      const std::size_t kk = o->k ? o->k : cfg.pair_k;
      const std::uint64_t seed =
          st == PairStrategy::kRandom ? cfg.require_seed("random pair selection") : cfg.seed.value_or(0);
      const SimilarityMatrix m = matrix_from(p_matrix, p_src, p_tgt);
      const PairSelection sel = select_pairs(m, st, kk, seed, make_eligibility(p_elig, p_manifests));
      if (s.dry_run()) {
        s.out() << "dry-run: " << sel.pairs.size() << " pairs (" << to_string(st) << ", k=" << kk
                << "), mean similarity " << fmt("%.4f", sel.mean_similarity) << "\n";
      }
      s.emit(p_out, format_pair_file(sel));
    });
  }
  {
    auto* folds = pairs->add_subcommand("folds", "Nested top-k selections for k = 2, 4, ...");
    struct FoldsArgs { std::size_t max_folds = 0; std::string out_dir; };
    auto* o = hold<FoldsArgs>(keep);
    add_pair_inputs(folds);
    folds->add_option("--max-folds", o->max_folds, "Largest k (default: config)");
    folds->add_option("--out-dir", o->out_dir, "Directory for pairs_k<k>.jsonl files")->required();
    bind(folds, [&, o](Session& s) {
      const std::size_t mf = o->max_folds ? o->max_folds : s.config().max_folds;
      const SimilarityMatrix m = matrix_from(p_matrix, p_src, p_tgt);
      const auto plan = build_fold_plan(m, mf, make_eligibility(p_elig, p_manifests));
      for (const auto& sel : plan) {
        const fs::path file = fs::path(o->out_dir) / ("pairs_k" + std::to_string(sel.k) + ".jsonl");
        s.emit(file.string(), format_pair_file(sel));
        s.out() << "k=" << sel.k << ": " << sel.pairs.size() << " pairs, mean similarity "
                << fmt("%.4f", sel.mean_similarity) << "\n";
      }
    });
  }

  // augment -----------------------------------------------------------------
  auto* augment = app.add_subcommand("augment", "Plan and run data augmentation");
  augment->require_subcommand(1);
  {
    auto* ps = augment->add_subcommand("pitch", "Pitch-shift augmentation");
    struct PitchArgs { std::string manifest; std::string out_dir; std::string age_groups; std::optional<int> lo; std::optional<int> hi; std::size_t per_speaker = 0; };
    auto* o = hold<PitchArgs>(keep);
    ps->add_option("manifest", o->manifest, "Source manifest")->required()->check(CLI::ExistingFile);
    ps->add_option("--out-dir", o->out_dir, "Output directory (default: config output_dir)");
    ps->add_option("--age-groups", o->age_groups, "Comma list of age groups (default: config)");
    ps->add_option("--cents-low", o->lo, "Lowest shift in cents");
    ps->add_option("--cents-high", o->hi, "Highest shift in cents");
    ps->add_option("--per-speaker", o->per_speaker, "Distinct shifts per speaker");
    bind(ps, [&, o](Session& s) {
      const auto& cfg = s.config();
      const Corpus src = load_manifest(o->manifest);
      PitchPlanOptions po;
      po.age_groups = o->age_groups.empty() ? cfg.pitch_age_groups : parse_age_groups(o->age_groups);
      po.cents_low = o->lo.value_or(cfg.pitch_cents_low);
      po.cents_high = o->hi.value_or(cfg.pitch_cents_high);
      po.per_speaker = o->per_speaker ? o->per_speaker : cfg.pitch_per_speaker;
      po.min_duration = cfg.min_duration;
      po.seed = cfg.require_seed("pitch augmentation");
      const AugmentationPlan plan = plan_pitch_augmentation(src, po);
      s.out() << plan_summary(plan, src, "pitch_shift");
      if (s.dry_run()) return;
      const fs::path dir = o->out_dir.empty() ? cfg.output_dir : fs::path(o->out_dir);
      if (dir.empty()) throw Error(ErrorKind::kUsage, "no output directory (--out-dir or output_dir)");
      auto backend = make_conversion_backend("pitch", cfg.wsola);
      const ExecutionResult r = execute_plan(plan, *backend, src, nullptr, {dir, s.workers()});
      finish_augment(s, dir, plan, r);
    });
  }
  {
    auto* vc = augment->add_subcommand("vc", "Voice-conversion augmentation");
    struct VcArgs { std::string sources; std::string targets; std::string pair_file; std::string mode; std::string out_dir; std::string backend_spec; };
    auto* o = hold<VcArgs>(keep);
    vc->add_option("--sources", o->sources, "Source manifest")->required()->check(CLI::ExistingFile);
    vc->add_option("--targets", o->targets, "Target-speaker manifest (default: the sources)")
        ->check(CLI::ExistingFile);
    vc->add_option("--pairs", o->pair_file, "Pair file")->required()->check(CLI::ExistingFile);
    vc->add_option("--mode", o->mode, "monolingual | crosslingual")
        ->required()
        ->check(CLI::IsMember({"monolingual", "crosslingual"}));
    vc->add_option("--out-dir", o->out_dir, "Output directory (default: config output_dir)");
    vc->add_option("--backend", o->backend_spec, "Conversion backend (default: config vc_backend)");
    bind(vc, [&, o](Session& s) {
      const auto& cfg = s.config();
      const Corpus src = load_manifest(o->sources);
      const Corpus tgt = o->targets.empty() ? src : load_manifest(o->targets);
      const PairSelection sel = load_pair_file(o->pair_file);
      VcPlanOptions vo;
      vo.min_duration = cfg.min_duration;
      const AugmentationPlan plan = plan_vc_augmentation(src, tgt, sel, parse_vc_mode(o->mode), vo);
      s.out() << plan_summary(plan, src, std::string("vc_") + std::string(o->mode));
      if (s.dry_run()) return;
      const fs::path dir = o->out_dir.empty() ? cfg.output_dir : fs::path(o->out_dir);
      if (dir.empty()) throw Error(ErrorKind::kUsage, "no output directory (--out-dir or output_dir)");
      auto backend = make_conversion_backend(o->backend_spec.empty() ? cfg.vc_backend : o->backend_spec,
                                             cfg.wsola);
      const ExecutionResult r = execute_plan(plan, *backend, src, &tgt, {dir, s.workers()});
      finish_augment(s, dir, plan, r);
    });
  }

  // score -------------------------------------------------------------------
  auto* score = app.add_subcommand("score", "WER scoring and significance");
  score->require_subcommand(1);
  {
    auto* w = score->add_subcommand("wer", "Pooled and per-style WER");
    struct WerArgs { std::string manifest; std::string hyps; std::string format = "text"; std::string output; };
    auto* o = hold<WerArgs>(keep);
    w->add_option("manifest", o->manifest, "Reference manifest")->required()->check(CLI::ExistingFile);
    w->add_option("hypotheses", o->hyps, "Hypothesis file")->required()->check(CLI::ExistingFile);
    w->add_option("--format", o->format, "text | json")->check(CLI::IsMember({"text", "json"}));
    w->add_option("-o,--output", o->output, "Report file (default: stdout)");
    bind(w, [&, o](Session& s) {
      const ScoreReport r = score_hypotheses(load_manifest(o->manifest), fs::path(o->hyps));
      s.emit(o->output, o->format == "json" ? format_score_json(r) : format_score_text(r));
    });
  }
  {
    auto* m = score->add_subcommand("mapsswe", "Matched-pairs sentence-segment word error test");
    struct MapssweArgs { std::string manifest; std::string hyps_a; std::string hyps_b; std::string style; std::string output; };
    auto* o = hold<MapssweArgs>(keep);
    m->add_option("manifest", o->manifest, "Reference manifest")->required()->check(CLI::ExistingFile);
    m->add_option("hypotheses_a", o->hyps_a, "System A (baseline)")->required()->check(CLI::ExistingFile);
    m->add_option("hypotheses_b", o->hyps_b, "System B")->required()->check(CLI::ExistingFile);
    m->add_option("--style", o->style, "Restrict to one speaking style")
        ->check(CLI::IsMember({"read", "hmi", "spontaneous"}));
    m->add_option("-o,--output", o->output, "Result JSON (default: stdout)");
    bind(m, [&, o](Session& s) {
      const Corpus c = restrict_style(load_manifest(o->manifest), o->style);
      const SystemComparison cmp = compare_systems(c, load_hypotheses(o->hyps_a), load_hypotheses(o->hyps_b));
      s.emit(o->output, format_mapsswe_json(cmp.result));
      s.out() << format_verdict(cmp, fs::path(o->hyps_a).filename().string(),
                                fs::path(o->hyps_b).filename().string());
    });
  }

  // quality -----------------------------------------------------------------
  auto* quality = app.add_subcommand("quality", "Quality filtering of generated speech");
  quality->require_subcommand(1);
  {
    auto* qs = quality->add_subcommand("score", "Recognize and score generated utterances");
    struct QualityScoreArgs { std::string manifest; std::string output; std::string backend_spec; std::string work_dir; std::string hyp_out; };
    auto* o = hold<QualityScoreArgs>(keep);
    qs->add_option("manifest", o->manifest, "Augmented manifest")->required()->check(CLI::ExistingFile);
    qs->add_option("-o,--output", o->output, "Score file (JSONL)")->required();
    qs->add_option("--backend", o->backend_spec, "ASR backend (default: config asr_backend)");
    qs->add_option("--work-dir", o->work_dir, "Backend scratch directory (default: <output>.work)");
    qs->add_option("--hypotheses", o->hyp_out, "Also write the raw hypotheses here");
    bind(qs, [&, o](Session& s) {
      const Corpus c = load_manifest(o->manifest);
      std::size_t n = 0;
      for (const auto& r : c.records) n += r.is_generated();
      const std::string spec = o->backend_spec.empty() ? s.config().asr_backend : o->backend_spec;
      if (s.dry_run()) {
        s.out() << "dry-run: would score " << n << " generated utterances with " << spec << "\n";
        return;
      }
      auto backend = make_asr_backend(spec);
      HypothesisMap hyps;
      const fs::path wd = o->work_dir.empty() ? fs::path(o->output + ".work") : fs::path(o->work_dir);
      const auto scores = score_generated(c, *backend, wd, &hyps);
      s.emit(o->output, format_scores(scores));
      if (!o->hyp_out.empty()) s.emit(o->hyp_out, format_hypotheses(hyps));
      s.out() << "scored " << scores.size() << " generated utterances\n";
    });
  }
  {
    auto* qf = quality->add_subcommand("filter", "Keep generated speech up to a quality level");
    struct QualityFilterArgs { std::string manifest; std::string scores; std::string mode; std::string output; int level = 100; };
    auto* o = hold<QualityFilterArgs>(keep);
    qf->add_option("manifest", o->manifest, "Augmented manifest")->required()->check(CLI::ExistingFile);
    qf->add_option("scores", o->scores, "Score file from `quality score`")
        ->required()
        ->check(CLI::ExistingFile);
    qf->add_option("--mode", o->mode, "utterance_threshold | speaker_percentile")
        ->required()
        ->check(CLI::IsMember({"utterance_threshold", "speaker_percentile"}));
    qf->add_option("--level", o->level, "10, 20, ..., 100")->required();
    qf->add_option("-o,--output", o->output, "Filtered manifest")->required();
    bind(qf, [&, o](Session& s) {
      const Corpus c = load_manifest(o->manifest);
      const auto sc = parse_scores(read_text_file(o->scores));
      const QualityLevel ql{parse_quality_mode(o->mode), o->level};
      Corpus kept = filter_by_level(sc, c, ql);
      const fs::path out_path(o->output);
      kept = rebase(kept, out_path.has_parent_path() ? out_path.parent_path() : fs::path("."));
      kept.name = out_path.filename().string();
      const double before = total_hours(c), after = total_hours(kept);
      s.out() << "kept " << kept.records.size() << " of " << c.records.size() << " utterances, "
              << fmt("%.2f", after) << " h (" << fmt("%+.2f", after - before) << " h)\n";
      s.emit(o->output, format_manifest(kept));
    });
  }

  // report ------------------------------------------------------------------
  auto* report = app.add_subcommand("report", "Experiment summary tables");
  report->require_subcommand(1);
  {
    auto* t = report->add_subcommand("table", "Render a results table");
    struct TableArgs { std::string rows; std::string format = "text"; std::string output; };
    auto* o = hold<TableArgs>(keep);
    t->add_option("rows", o->rows, "Rows file (JSON array)")->required()->check(CLI::ExistingFile);
    t->add_option("--format", o->format, "text | json | markdown")
        ->check(CLI::IsMember({"text", "json", "markdown"}));
    t->add_option("-o,--output", o->output, "Output file (default: stdout)");
    bind(t, [&, o](Session& s) {
      const auto r = load_experiment_rows(o->rows);
      s.emit(o->output, render_table(r, parse_table_format(o->format)));
    });
  }

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "cvaug: error[usage]: " << e.what() << "\n";
    CLI::App* failing = &app;
    for (CLI::App* sub = &app; sub;) {
      auto subs = sub->get_subcommands();
      if (subs.empty()) break;
      failing = sub = subs.front();
    }
    err << failing->help();
    return 2;
  }

  try {
    if (*seed_opt) g.seed = seed_value;
    Session session(g, out);
    action(session);
    return 0;
  } catch (const Error& e) {
    err << "cvaug: error[" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::kUsage ? 2 : 1;
  } catch (const fs::filesystem_error& e) {
    err << "cvaug: error[io]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "cvaug: error[internal]: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cvaug
