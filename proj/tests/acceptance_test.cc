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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check throws `Failed` with a reason on the first violation.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cvaug/augment.h"
#include "cvaug/cli.h"
#include "cvaug/corpus.h"
#include "cvaug/dsp.h"
#include "cvaug/embeddings.h"
#include "cvaug/error.h"
#include "cvaug/io.h"
#include "cvaug/pairing.h"
#include "cvaug/process.h"
#include "cvaug/quality.h"
#include "cvaug/report.h"
#include "cvaug/scoring.h"
#include "cvaug/significance.h"
#include "support/fixtures.h"

namespace cvaug {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;
using Words = std::vector<std::string>;

struct Failed {
  std::string reason;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failed{what};
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Hours accounting

double hours_line(const std::string& out, const std::string& label) {
  const auto at = out.find(label);
  require(at != std::string::npos, "dry-run output lacks \"" + label + "\"");
  return std::strtod(out.c_str() + at + label.size(), nullptr);
}

std::string check_hours() {
  const auto t0 = Clock::now();
  testing::TempDir dir;
  const Corpus adult = testing::hours_fixture("adult", AgeGroup::kAdult, Language::kNl, 424.54, 40, 25);
  const Corpus teen = testing::hours_fixture("teen", AgeGroup::kTeen, Language::kNl, 5.32, 4, 10);
  const Corpus child = testing::hours_fixture("child", AgeGroup::kChild, Language::kNl, 7.37, 6, 20);
  const Corpus base1 = merge(adult, teen);
  const Corpus base2 = merge(base1, child);
  write_manifest(dir / "base1.jsonl", base1);
  write_manifest(dir / "base2.jsonl", base2);

  struct Row {
    const char* name;
    std::string manifest;
    const char* group;
    double expected_delta;  // from the fixture durations
    double ref_delta;     // difference of the reference totals
    double ref_total;
  };
  const Row rows[] = {
      {"child PS", (dir / "base2.jsonl").string(), "child", 14.74, 452.0 - 437.2, 452.0},
      {"teen PS", (dir / "base1.jsonl").string(), "teen", 10.64, 440.5 - 429.9, 440.5},
  };
  std::string detail;
  for (const Row& r : rows) {
    std::ostringstream out, err;
    const int code = run_cli({"--dry-run", "--seed", "1", "augment", "pitch", r.manifest, "--age-groups",
                              r.group, "--out-dir", (dir / "never").string()},
                             out, err);
    require(code == 0, std::string(r.name) + ": dry-run failed: " + err.str());
    const double added = hours_line(out.str(), "expected added hours: +");
    const double total = hours_line(out.str(), "augmented total hours: ");
    require(std::abs(added - r.expected_delta) < 0.005,
            std::string(r.name) + ": added " + fmt(added) + " h, fixture implies " + fmt(r.expected_delta));
    require(std::abs(added - r.ref_delta) <= 0.01 * r.ref_delta,
            std::string(r.name) + ": added " + fmt(added) + " h vs reference delta " + fmt(r.ref_delta));
    require(std::abs(total - r.ref_total) <= 0.01 * r.ref_total,
            std::string(r.name) + ": total " + fmt(total) + " h vs reference " + fmt(r.ref_total));
    detail += std::string(r.name) + " +" + fmt(added, 2) + " h (reference " + fmt(r.ref_delta, 1) + "); ";
  }
  require(!fs::exists(dir / "never"), "dry-run created the output directory");
  const double elapsed = seconds_since(t0);
  require(elapsed < 1.0, "runtime " + fmt(elapsed, 2) + " s exceeds 1 s");
  return detail + fmt(elapsed, 3) + " s";
}

// ---------------------------------------------------------------------------
// 2. Pitch-shift frequency law

std::string check_pitch_law() {
  const auto t0 = Clock::now();
  double worst_f0 = 0.0, worst_dur = 0.0;
  for (double f0 : {150.0, 220.0, 300.0}) {
    const AudioBuffer in = testing::sine(f0, 1.0);
    for (double cents : {250.0, 310.0, 370.0, -250.0}) {
      const AudioBuffer out = pitch_shift(in, cents);
      const double expect = f0 * std::pow(2.0, cents / 1200.0);
      const F0Track track = estimate_f0(out);
      require(track.median_f0.has_value(), "no F0 in output of " + fmt(f0, 0) + " Hz " + fmt(cents, 0));
      const double tracked = *track.median_f0;
      const double spectral = testing::dominant_frequency(out);
      const double dur_err = std::abs(out.duration() - in.duration()) / in.duration();
      for (double got : {tracked, spectral}) {
        const double err = std::abs(got - expect) / expect;
        worst_f0 = std::max(worst_f0, err);
        require(err <= 0.01, fmt(f0, 0) + " Hz by " + fmt(cents, 0) + " cents: measured " + fmt(got, 2) +
                                 " Hz, expected " + fmt(expect, 2));
      }
      worst_dur = std::max(worst_dur, dur_err);
      require(dur_err <= 0.01, "duration drift " + fmt(100 * dur_err, 2) + "%");
    }
  }
  const double elapsed = seconds_since(t0);
  require(elapsed < 30.0, "runtime " + fmt(elapsed, 2) + " s exceeds 30 s");
  return "12 cases, worst F0 error " + fmt(100 * worst_f0, 3) + "%, worst duration error " +
         fmt(100 * worst_dur, 3) + "%, " + fmt(elapsed, 2) + " s";
}

// ---------------------------------------------------------------------------
// 3. Alignment oracle

// Plain recursion over (i, j); the memo only caches its own results.
struct Oracle {
  const Words& a;
  const Words& b;
  std::array<int, 49> memo;

  Oracle(const Words& x, const Words& y) : a(x), b(y) { memo.fill(-1); }

  int d(std::size_t i, std::size_t j) {
    if (i == a.size()) return static_cast<int>(b.size() - j);
    if (j == b.size()) return static_cast<int>(a.size() - i);
    int& m = memo[i * 7 + j];
    if (m >= 0) return m;
    m = std::min({d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1), d(i + 1, j) + 1, d(i, j + 1) + 1});
    return m;
  }
};

std::string check_alignment_oracle() {
  const auto t0 = Clock::now();
  std::vector<Words> all{{}};
  const Words alphabet{"a", "b", "c"};
  for (std::size_t len = 1; len <= 6; ++len) {
    const std::size_t start = all.size();
    for (std::size_t i = 0; i < start; ++i) {
      if (all[i].size() != len - 1) continue;
      for (const auto& s : alphabet) {
        Words w = all[i];
        w.push_back(s);
        all.push_back(std::move(w));
      }
    }
  }
  require(all.size() == 1093, "expected 1093 sequences, built " + std::to_string(all.size()));
  std::size_t pairs = 0;
  for (const auto& ref : all) {
    for (const auto& hyp : all) {
      const Alignment al = align(ref, hyp);
      Oracle o(ref, hyp);
      const int want = o.d(0, 0);
      if (static_cast<int>(al.counts.errors()) != want) {
        std::string r, h;
        for (const auto& w : ref) r += w;
        for (const auto& w : hyp) h += w;
        throw Failed{"distance(" + r + ", " + h + ") = " + std::to_string(al.counts.errors()) +
                     ", oracle " + std::to_string(want)};
      }
      require(al.counts.n_ref == ref.size(), "n_ref mismatch");
      ++pairs;
    }
  }
  const double elapsed = seconds_since(t0);
  require(elapsed < 300.0, "exhaustive run exceeded 5 min");
  return std::to_string(pairs) + " pairs exhaustive, " + fmt(elapsed, 1) + " s";
}

// ---------------------------------------------------------------------------
// 4. MAPSSWE

UtteranceRecord utterance(const std::string& id, Words words) {
  UtteranceRecord r;
  r.utterance_id = id;
  r.speaker_id = "spk";
  r.audio_path = id + ".wav";
  r.transcript = std::move(words);
  r.duration = 1.0;
  return r;
}

Corpus corpus_of(std::vector<UtteranceRecord> records) {
  Corpus c;
  c.name = "fixture";
  c.records = std::move(records);
  c.speakers = derive_profiles(c.records);
  return c;
}

std::string join(const Words& w) {
  std::string s;
  for (const auto& x : w) s += (s.empty() ? "" : " ") + x;
  return s;
}

Words perturb(const Words& ref, std::mt19937_64& gen, const Words& vocab, int rate) {
  Words out;
  for (const auto& w : ref) {
    const int roll = static_cast<int>(gen() % 100);
    if (roll < rate / 3) continue;                                            // deletion
    if (roll < 2 * rate / 3) { out.push_back(vocab[gen() % vocab.size()]); continue; }  // substitution
    out.push_back(w);
    if (roll < rate) out.push_back(vocab[gen() % vocab.size()]);                // insertion
  }
  return out;
}

std::string check_mapsswe() {
  const auto t0 = Clock::now();
  const MapssweResult r = mapsswe_from_z(std::vector<long>{1, 1, 1, 0});
  require(std::abs(r.w_statistic - 3.0) <= 1e-9, "W = " + fmt(r.w_statistic, 12));
  require(std::abs(r.p_value - 0.00270) <= 1e-4, "p = " + fmt(r.p_value, 6));
  const MapssweResult zero = mapsswe_from_z(std::vector<long>{0, 0, 0, 0});
  require(zero.p_value == 1.0, "all-zero z gives p = " + fmt(zero.p_value, 6));

  std::mt19937_64 gen(20240901);
  const Words vocab{"de", "kat", "zit", "op", "mat", "het", "huis", "is", "rood", "wij"};
  std::size_t checked = 0, too_small = 0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<UtteranceRecord> recs;
    HypothesisMap a, b;
    const std::size_t n_utts = 2 + gen() % 6;
    for (std::size_t u = 0; u < n_utts; ++u) {
      Words ref(1 + gen() % 8);
      for (auto& w : ref) w = vocab[gen() % vocab.size()];
      const std::string id = "u" + std::to_string(u);
      a[id] = join(perturb(ref, gen, vocab, 30));
      b[id] = join(perturb(ref, gen, vocab, 30));
      recs.push_back(utterance(id, ref));
    }
    const Corpus base = corpus_of(recs);

    // Perfect utterances: both systems reproduce the reference exactly.
    std::vector<UtteranceRecord> padded = recs;
    HypothesisMap pa = a, pb = b;
    const std::size_t n_perfect = 1 + gen() % 4;
    for (std::size_t p = 0; p < n_perfect; ++p) {
      Words ref(1 + gen() % 8);
      for (auto& w : ref) w = vocab[gen() % vocab.size()];
      const std::string id = "perfect" + std::to_string(p);
      pa[id] = pb[id] = join(ref);
      padded.insert(padded.begin() + static_cast<long>(gen() % (padded.size() + 1)), utterance(id, ref));
    }
    const Corpus with_perfect = corpus_of(padded);

    SystemComparison ab, ba, pab;
    try {
      ab = compare_systems(base, a, b);
    } catch (const Error&) {
      // Fewer than two segments: the swap and the padding must fail the same way.
      bool swap_throws = false, pad_throws = false;
      try { compare_systems(base, b, a); } catch (const Error&) { swap_throws = true; }
      try { compare_systems(with_perfect, pa, pb); } catch (const Error&) { pad_throws = true; }
      require(swap_throws && pad_throws, "fixture " + std::to_string(t) + ": inconsistent rejection");
      ++too_small;
      continue;
    }
    ba = compare_systems(base, b, a);
    pab = compare_systems(with_perfect, pa, pb);
    const std::string tag = "fixture " + std::to_string(t);
    require(ba.result.w_statistic == -ab.result.w_statistic, tag + ": W not antisymmetric");
    require(ba.result.p_value == ab.result.p_value, tag + ": p changes under swap");
    require(ba.result.stars == ab.result.stars, tag + ": stars change under swap");
    require(pab.segments.size() == ab.segments.size(), tag + ": perfect utterances added segments");
    require(pab.result.w_statistic == ab.result.w_statistic, tag + ": perfect utterances changed W");
    require(pab.result.p_value == ab.result.p_value, tag + ": perfect utterances changed p");
    ++checked;
  }
  require(checked >= 900, "only " + std::to_string(checked) + " fixtures had two or more segments");
  const double elapsed = seconds_since(t0);
  require(elapsed < 10.0, "runtime " + fmt(elapsed, 2) + " s exceeds 10 s");
  return "W = " + fmt(r.w_statistic, 9) + ", p = " + fmt(r.p_value, 5) + "; " + std::to_string(checked) +
         " randomized fixtures (+" + std::to_string(too_small) + " single-segment, rejected consistently), " +
         fmt(elapsed, 2) + " s";
}

// ---------------------------------------------------------------------------
// 5. Pair-selection ordering

std::string check_pair_ordering() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(7);
  std::normal_distribution<double> normal;
  for (int set = 0; set < 200; ++set) {
    const std::size_t n_src = 1 + gen() % 6, n_tgt = 2 + gen() % 10, dim = 2 + gen() % 16;
    auto draw = [&](const std::string& prefix, std::size_t n) {
      std::vector<Embedding> out;
      for (std::size_t i = 0; i < n; ++i) {
        Embedding e;
        e.speaker_id = prefix + std::to_string(i);
        e.vector.resize(dim);
        for (auto& v : e.vector) v = normal(gen);
        out.push_back(std::move(e));
      }
      return out;
    };
    const SimilarityMatrix m = build_similarity_matrix(draw("s", n_src), draw("t", n_tgt));
    const double top = select_pairs(m, PairStrategy::kTop, 2, 0).mean_similarity;
    const double last = select_pairs(m, PairStrategy::kLast, 2, 0).mean_similarity;
    require(top >= last, "set " + std::to_string(set) + ": top-2 " + fmt(top) + " < last-2 " + fmt(last));
    double sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double r = select_pairs(m, PairStrategy::kRandom, 2, seed).mean_similarity;
      require(r >= last - 1e-12 && r <= top + 1e-12, "set " + std::to_string(set) + ": random draw outside [last, top]");
      sum += r;
    }
    const double mean_random = sum / 100.0;
    require(mean_random >= last - 1e-12 && mean_random <= top + 1e-12,
            "set " + std::to_string(set) + ": mean random " + fmt(mean_random) + " outside [" + fmt(last) +
                ", " + fmt(top) + "]");
  }

  std::size_t checked_folds = 0;
  for (int set = 0; set < 20; ++set) {
    std::vector<Embedding> src, tgt;
    for (std::size_t i = 0; i < 4; ++i) src.push_back({"s" + std::to_string(i), {normal(gen), normal(gen), normal(gen)}});
    for (std::size_t i = 0; i < 12; ++i) tgt.push_back({"t" + std::to_string(i), {normal(gen), normal(gen), normal(gen)}});
    const SimilarityMatrix m = build_similarity_matrix(src, tgt);
    const auto folds = build_fold_plan(m, 10);
    require(folds.size() == 5, "expected folds k = 2..10");
    for (std::size_t i = 0; i + 1 < folds.size(); ++i) {
      const auto small = folds[i].pair_set(), big = folds[i + 1].pair_set();
      require(folds[i].k == 2 * (i + 1), "fold order");
      require(std::includes(big.begin(), big.end(), small.begin(), small.end()),
              "pairs(k=" + std::to_string(folds[i].k) + ") not within pairs(k=" + std::to_string(folds[i + 1].k) + ")");
      ++checked_folds;
    }
  }
  const double elapsed = seconds_since(t0);
  require(elapsed < 30.0, "runtime " + fmt(elapsed, 2) + " s exceeds 30 s");
  return "200 sets x 100 random draws, " + std::to_string(checked_folds) + " fold nestings, " + fmt(elapsed, 2) + " s";
}

// ---------------------------------------------------------------------------
// 6. Quality-filter monotonicity

std::string check_quality_monotonicity() {
  const auto t0 = Clock::now();
  testing::TempDir dir;
  std::mt19937_64 gen(99);
  const Words vocab{"een", "twee", "drie", "vier", "vijf", "zes", "zeven"};
  std::vector<UtteranceRecord> recs;
  HypothesisMap scripted;
  for (int i = 0; i < 50; ++i) {
    Words ref(2 + gen() % 8);
    for (auto& w : ref) w = vocab[gen() % vocab.size()];
    UtteranceRecord o = utterance("orig" + std::to_string(i), ref);
    o.speaker_id = "o" + std::to_string(i % 3);
    recs.push_back(o);
    UtteranceRecord r = utterance("gen" + std::to_string(i), ref);
    r.speaker_id = "g" + std::to_string(i % 9);
    r.origin = Origin::kVcCrosslingual;
    r.provenance = Provenance{o.utterance_id, {{"target_speaker", "x"}}};
    scripted[r.utterance_id] = join(perturb(ref, gen, vocab, static_cast<int>(gen() % 120)));
    recs.push_back(r);
  }
  const Corpus c = corpus_of(recs);
  ScriptedAsrBackend backend(scripted);
  const auto scores = score_generated(c, backend, dir / "work");
  require(scores.size() == 50, "expected 50 scores");

  std::string detail;
  for (QualityMode mode : {QualityMode::kUtteranceThreshold, QualityMode::kSpeakerPercentile}) {
    std::set<std::string> prev;
    std::string counts;
    for (int level = 10; level <= 100; level += 10) {
      const Corpus kept = filter_by_level(scores, c, {mode, level});
      std::set<std::string> ids;
      for (const auto& r : kept.records) ids.insert(r.utterance_id);
      require(std::includes(ids.begin(), ids.end(), prev.begin(), prev.end()),
              std::string(to_string(mode)) + ": level " + std::to_string(level) + " drops utterances kept below it");
      for (int i = 0; i < 50; ++i) require(ids.count("orig" + std::to_string(i)), "original dropped");
      const auto violations = validate(kept, {.check_audio = false});
      require(violations.empty(), "filtered corpus fails validation: " +
                                      (violations.empty() ? "" : violations[0].subject + " " + violations[0].message));
      counts += std::to_string(ids.size() - 50) + (level < 100 ? "/" : "");
      prev = std::move(ids);
      if (level == 100) require(kept == c, std::string(to_string(mode)) + ": level 100 is not the full set");
    }
    detail += std::string(to_string(mode)) + " kept " + counts + "; ";
  }
  const double elapsed = seconds_since(t0);
  require(elapsed < 5.0, "runtime " + fmt(elapsed, 2) + " s exceeds 5 s");
  return detail + fmt(elapsed, 3) + " s";
}

// ---------------------------------------------------------------------------
// 7. End-to-end pipeline through the CLI binary

void cli(const fs::path& cwd, const fs::path& log, std::vector<std::string> args) {
  const std::string cmd = shell_quote(CVAUG_CLI_PATH) + " >>" + shell_quote(log.string()) + " 2>&1";
  const int code = run_command(cmd, args, cwd);
  if (code != 0) {
    std::string line;
    for (const auto& a : args) line += " " + a;
    throw Failed{"cvaug" + line + " exited " + std::to_string(code) + ":\n" + read_text_file(log)};
  }
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() != "log.txt") {
      files[fs::relative(e.path(), root).string()] = read_text_file(e.path());
    }
  }
  return files;
}

void pipeline(const fs::path& run) {
  fs::create_directories(run);
  const fs::path log = run / "log.txt";
  const std::string src = "../src/manifest.jsonl";
  cli(run, log, {"corpus", "validate", src});
  cli(run, log, {"embed", "compute", src, "-o", "emb.jsonl"});
  cli(run, log, {"embed", "import", "emb.jsonl", "-o", "emb_canon.jsonl", "--against", "emb.jsonl", "--matrix",
                 "sim.json"});
  cli(run, log, {"pairs", "select", "--matrix", "sim.json", "--eligibility", "crosslingual", "--manifest", src,
                 "--k", "2", "-o", "pairs.jsonl"});
  cli(run, log, {"augment", "vc", "--sources", src, "--pairs", "pairs.jsonl", "--mode", "crosslingual",
                 "--backend", "standin-vc", "--out-dir", "vc"});
  cli(run, log, {"--seed", "20240901", "augment", "pitch", "vc/manifest.jsonl", "--age-groups", "child",
                 "--out-dir", "ps"});
  cli(run, log, {"corpus", "validate", "ps/manifest.jsonl"});
  cli(run, log, {"quality", "score", "vc/manifest.jsonl", "--backend", "echo", "-o", "scores.jsonl"});
  cli(run, log, {"quality", "filter", "vc/manifest.jsonl", "scores.jsonl", "--mode", "speaker_percentile",
                 "--level", "50", "-o", "filtered/manifest.jsonl"});
  cli(run, log, {"corpus", "validate", "filtered/manifest.jsonl"});
  cli(run, log, {"corpus", "stats", "ps/manifest.jsonl", "--format", "json"});
}

std::string check_end_to_end() {
  const auto t0 = Clock::now();
  testing::TempDir dir;
  std::vector<testing::SyntheticSpeaker> speakers{
      {"nl_c1", Language::kNl, AgeGroup::kChild, Gender::kFemale, 240},
      {"nl_c2", Language::kNl, AgeGroup::kChild, Gender::kMale, 210},
      {"nl_c3", Language::kNl, AgeGroup::kChild, Gender::kFemale, 280},
      {"de_c1", Language::kDe, AgeGroup::kChild, Gender::kMale, 230},
      {"de_c2", Language::kDe, AgeGroup::kChild, Gender::kFemale, 300},
      {"de_c3", Language::kDe, AgeGroup::kChild, Gender::kMale, 260}};
  const Corpus src = testing::write_synthetic_corpus(dir / "src", speakers, 10, 5);
  require(src.records.size() == 60, "fixture has " + std::to_string(src.records.size()) + " utterances");

  pipeline(dir / "run1");
  const double first = seconds_since(t0);
  pipeline(dir / "run2");

  const Corpus vc = load_manifest(dir / "run1" / "vc" / "manifest.jsonl");
  const Corpus ps = load_manifest(dir / "run1" / "ps" / "manifest.jsonl");
  for (const Corpus* c : {&vc, &ps}) {
    const auto violations = validate(*c);
    require(violations.empty(), c->name + ": " + std::to_string(violations.size()) + " violations, first: " +
                                    (violations.empty() ? "" : violations[0].subject + " " + violations[0].message));
  }
  std::size_t generated = 0;
  for (const Corpus* c : {&vc, &ps}) {
    for (const auto& r : c->records) {
      if (!r.is_generated()) continue;
      ++generated;
      const UtteranceRecord* source = c->find_record(r.provenance->source_utterance_id);
      require(source != nullptr, r.utterance_id + ": source missing");
      require(source->transcript == r.transcript, r.utterance_id + ": transcript differs from its source");
    }
  }
  const std::size_t vc_generated = vc.records.size() - 60;
  require(vc_generated == 120, "expected 120 converted utterances, got " + std::to_string(vc_generated));

  const auto a = snapshot(dir / "run1"), b = snapshot(dir / "run2");
  require(a.size() == b.size(), "runs produced different file sets");
  for (const auto& [name, bytes] : a) {
    auto it = b.find(name);
    require(it != b.end(), "second run lacks " + name);
    require(it->second == bytes, name + " differs between runs");
  }
  const double elapsed = seconds_since(t0);
  require(first < 120.0, "one pipeline run took " + fmt(first, 1) + " s");
  return "60 source utterances, " + std::to_string(generated) + " generated, " + std::to_string(a.size()) +
         " output files byte-identical across runs, " + fmt(first, 1) + " s per run";
}

// ---------------------------------------------------------------------------
// 8. Report fidelity

std::string check_report() {
  testing::TempDir dir;
  write_text_file(dir / "rows.json", R"([
  {"label": "Top",    "baseline": true, "similarity": 0.59, "wer_read": 7.4, "wer_hmi": 16.6, "wer_avg": 9.1},
  {"label": "Random", "similarity": 0.46, "wer_read": 7.4, "wer_hmi": 17.3, "wer_avg": 9.2},
  {"label": "Last",   "similarity": 0.29, "wer_read": 8.2, "wer_hmi": 18.9, "wer_avg": 10.2}
])");
  const auto rows = load_experiment_rows(dir / "rows.json");
  const std::string text = render_table(rows, TableFormat::kText);

  const std::vector<std::pair<std::string, std::vector<std::string>>> expect{
      {"Top", {"0.59", "[7.4]", "[16.6]", "[9.1]"}},
      {"Random", {"0.46", "[7.4]", "17.3", "9.2"}},
      {"Last", {"0.29", "8.2", "18.9", "10.2"}}};
  std::size_t pos = 0;
  for (const auto& [label, cells] : expect) {
    const auto at = text.find("\n" + label + " ", pos);
    require(at != std::string::npos, "row " + label + " missing or out of order:\n" + text);
    const auto end = text.find('\n', at + 1);
    const std::string line = text.substr(at + 1, end - at - 1);
    std::istringstream in(line.substr(label.size()));
    std::vector<std::string> got;
    for (std::string cell; in >> cell;) got.push_back(cell);
    require(got == cells, "row " + label + " renders as \"" + line + "\"");
    pos = end;
  }

  const auto flags = lowest_flags(rows);
  require(flags[0].read && flags[0].hmi && flags[0].avg, "Top must hold every lowest flag");
  require(flags[1].read && !flags[1].hmi && !flags[1].avg, "Random ties Top on read only");
  require(!flags[2].read && !flags[2].hmi && !flags[2].avg, "Last holds no lowest flag");

  std::ostringstream out, err;
  require(run_cli({"report", "table", (dir / "rows.json").string(), "--format", "json"}, out, err) == 0,
          "report table failed: " + err.str());
  require(render_table(rows, TableFormat::kJson) == out.str(), "CLI and library JSON differ");
  return "3 rows in order, WERs 7.4/16.6/9.1, 7.4/17.3/9.2, 8.2/18.9/10.2, ties flagged";
}

struct Criterion {
  const char* name;
  std::function<std::string()> run;
};

}  // namespace
}  // namespace cvaug

int main() {
  using namespace cvaug;
  const Criterion criteria[] = {
      {"1 hours accounting", check_hours},
      {"2 pitch-shift frequency law", check_pitch_law},
      {"3 alignment oracle", check_alignment_oracle},
      {"4 mapsswe fixtures and properties", check_mapsswe},
      {"5 pair-selection ordering", check_pair_ordering},
      {"6 quality-filter monotonicity", check_quality_monotonicity},
      {"7 end-to-end pipeline", check_end_to_end},
      {"8 report fidelity", check_report},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string line;
    try {
      line = "PASS  " + std::string(c.name) + ": " + c.run();
    } catch (const Failed& f) {
      line = "FAIL  " + std::string(c.name) + ": " + f.reason;
      ++failures;
    } catch (const std::exception& e) {
      line = "FAIL  " + std::string(c.name) + ": unexpected error: " + e.what();
      ++failures;
    }
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
