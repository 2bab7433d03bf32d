// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "oracle.hpp"
#include "support.hpp"
#include "topiceval/cli/commands.hpp"
#include "topiceval/cli/evaluation.hpp"
#include "topiceval/cli/records.hpp"
#include "topiceval/cli/report.hpp"
#include "topiceval/coherence.hpp"
#include "topiceval/divergence.hpp"
#include "topiceval/lda.hpp"
#include "topiceval/nmf.hpp"
#include "topiceval/pipeline.hpp"

using namespace topiceval;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

CooccurrenceStats pair_stats(std::uint64_t n, std::uint64_t a, std::uint64_t b, std::uint64_t joint) {
  return CooccurrenceStats(EstimationMode::window, 10, 1, {0, 1}, n, {a, b}, {joint});
}

Outcome coherence_oracle() {
  const auto t0 = Clock::now();
  const std::size_t v = 300;
  const auto docs = testkit::random_docs(200, v, 20, 300, 2024);
  const auto corpus = testkit::corpus_from_ids(docs, v);
  const std::vector<oracle::Seq> seqs(corpus.sequences.begin(), corpus.sequences.end());

  std::mt19937_64 rng(99);
  std::vector<Topic> topics;
  for (int t = 0; t < 20; ++t) {
    std::vector<TokenId> pool(v);
    for (std::size_t i = 0; i < v; ++i) pool[i] = static_cast<TokenId>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    // Mix frequent and rare words.
    if (t % 2 == 0) std::sort(pool.begin(), pool.begin() + 40);
    topics.push_back(Topic{{pool.begin(), pool.begin() + 10}});
  }

  double worst = 0.0;
  const auto check = [&](Measure m, const oracle::Windows& w) {
    CoherenceConfig cfg;
    cfg.measure = m;
    const auto got = score_topics(corpus, topics, cfg);
    for (std::size_t i = 0; i < topics.size(); ++i) {
      const oracle::Seq t(topics[i].words.begin(), topics[i].words.end());
      double want = 0;
      if (m == Measure::c_v) want = oracle::c_v(w, t);
      if (m == Measure::npmi) want = oracle::c_npmi(w, t);
      if (m == Measure::umass) want = oracle::umass(w, t, cfg.epsilon);
      worst = std::max(worst, oracle::relative_error(got[i], want));
    }
  };
  check(Measure::umass, oracle::windows(seqs, 0, 1));
  check(Measure::npmi, oracle::windows(seqs, kNpmiDefaultWindow, 1));
  check(Measure::c_v, oracle::windows(seqs, kCvDefaultWindow, 1));
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 5.0,
          fmt::format("umass/c_npmi/c_v vs brute force, V={}, 200 docs, max rel err {:.3g} (<= 1e-9), {:.2f}s (< 5s)",
                      v, worst, secs)};
}

Outcome metric_bounds() {
  std::mt19937_64 rng(7);
  std::size_t npmi_bad = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::uint64_t n = std::uniform_int_distribution<std::uint64_t>(1, 5000)(rng);
    const std::uint64_t a = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
    const std::uint64_t b = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
    const std::uint64_t lo = a + b > n ? a + b - n : 0;
    const std::uint64_t j = std::uniform_int_distribution<std::uint64_t>(lo, std::min(a, b))(rng);
    const double x = npmi(0, 1, pair_stats(n, a, b, j));
    if (!(x >= -1.0 && x <= 1.0)) ++npmi_bad;
  }

  std::size_t range_bad = 0;
  double identity_worst = 0.0, disjoint_worst = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 60)(rng);
    std::vector<double> p(n), q(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = u(rng) < 0.3 ? 0.0 : u(rng);
      q[i] = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    p[0] += 0.1;
    q[n - 1] += 0.1;
    const auto dp = TopicWordDist::from_weights(p);
    const auto dq = TopicWordDist::from_weights(q);
    for (const auto m : {DivergenceMeasure::jsd, DivergenceMeasure::hellinger, DivergenceMeasure::cosine}) {
      const double d = divergence(m, dp.probs(), dq.probs());
      if (!(d >= 0.0 && d <= 1.0)) ++range_bad;
      identity_worst = std::max(identity_worst, std::abs(divergence(m, dp.probs(), dp.probs())));
    }
    // Disjoint supports: p on the first half, q on the second.
    std::vector<double> a(n, 0.0), b(n, 0.0);
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < n; ++i) (i < half ? a[i] : b[i]) = u(rng) + 0.01;
    const auto da = TopicWordDist::from_weights(a);
    const auto db = TopicWordDist::from_weights(b);
    for (const auto m : {DivergenceMeasure::jsd, DivergenceMeasure::hellinger, DivergenceMeasure::cosine}) {
      disjoint_worst = std::max(disjoint_worst, std::abs(divergence(m, da.probs(), db.probs()) - 1.0));
    }
  }
  const bool ok = npmi_bad == 0 && range_bad == 0 && identity_worst <= 1e-12 && disjoint_worst <= 1e-12;
  return {ok, fmt::format("npmi out of [-1,1]: {}/10000; jsd/hellinger/cosine out of [0,1]: {}/3000; "
                          "identical max {:.3g}, disjoint max |d-1| {:.3g} (<= 1e-12)",
                          npmi_bad, range_bad, identity_worst, disjoint_worst)};
}

Outcome spot_values() {
  const double n = npmi(0, 1, pair_stats(10, 5, 4, 3));
  const std::vector<double> p{0.5, 0.5, 0.0}, q{0.0, 0.5, 0.5};
  const double j = jsd(p, q);
  const std::vector<double> h1{0.5, 0.5}, h2{0.9, 0.1};
  const double h = hellinger(h1, h2);
  // apple=0 pear=1 car=2 road=3
  const auto corpus = testkit::corpus_from_ids({{0, 0, 0, 1}, {2, 2, 3, 3}}, 4);
  const double w = fit_ctfidf(corpus.bow, ClusterAssignment{{0, 1}, 2}).weights[0][0];
  struct Spot {
    const char* name;
    double got, want, tol;
  };
  const Spot spots[] = {{"npmi(5,4,3 of 10)", n, 0.33678, 1e-5},
                        {"jsd", j, 0.5, 1e-12},
                        {"hellinger", h, 0.32493, 1e-5},
                        {"W(apple)", w, 2.5419, 1e-4}};
  bool ok = true;
  std::string detail;
  for (const auto& s : spots) {
    const double diff = std::abs(s.got - s.want);
    ok = ok && diff <= s.tol;
    if (!detail.empty()) detail += "; ";
    detail += fmt::format("{}={:.9g} (want {} +- {:g}, off {:.3g}{})", s.name, s.got, s.want, s.tol, diff,
                          diff <= s.tol ? "" : " OUT");
  }
  return {ok, detail};
}

Outcome lda_recovery() {
  const auto t0 = Clock::now();
  const std::size_t v = 20, half = 10;
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<TokenId> word(0, static_cast<TokenId>(half - 1));
  std::vector<std::vector<TokenId>> docs(500);
  for (auto& d : docs) {
    const double theta = u(rng);
    for (int i = 0; i < 50; ++i) d.push_back(word(rng) + (u(rng) < theta ? 0 : static_cast<TokenId>(half)));
  }
  const auto corpus = testkit::corpus_from_ids(docs, v);
  LdaConfig cfg;
  cfg.k = 2;
  cfg.sweeps = 500;
  cfg.seed = 42;
  const auto phi = lda_phi(lda_fit(corpus.bow, cfg), cfg.beta);

  const auto l1 = [&](const TopicWordDist& est, std::size_t topic) {
    double s = 0;
    for (std::size_t w = 0; w < v; ++w) {
      const double truth = (w / half == topic) ? 1.0 / static_cast<double>(half) : 0.0;
      s += std::abs(est.probs()[w] - truth);
    }
    return s;
  };
  const double straight = (l1(phi[0], 0) + l1(phi[1], 1)) / 2.0;
  const double swapped = (l1(phi[0], 1) + l1(phi[1], 0)) / 2.0;
  const double err = std::min(straight, swapped);

  // K = 1: phi is the smoothed corpus unigram.
  LdaConfig one = cfg;
  one.k = 1;
  one.sweeps = 3;
  const auto phi1 = lda_phi(lda_fit(corpus.bow, one), one.beta);
  std::vector<double> count(v, 0.0);
  double total = 0;
  for (const auto& d : docs) {
    for (const auto t : d) {
      count[t] += 1;
      total += 1;
    }
  }
  double k1_worst = 0;
  for (std::size_t w = 0; w < v; ++w) {
    const double want = (count[w] + one.beta) / (total + static_cast<double>(v) * one.beta);
    k1_worst = std::max(k1_worst, std::abs(phi1[0].probs()[w] - want));
  }
  const double secs = seconds_since(t0);
  return {err < 0.1 && k1_worst <= 1e-15 && secs < 30.0,
          fmt::format("planted 2 topics, 500 docs, 500 sweeps: matched mean L1 {:.4f} (< 0.1); K=1 max diff {:.3g}; "
                      "{:.2f}s (< 30s)",
                      err, k1_worst, secs)};
}

Outcome nmf_rank2() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd w(50, 2), h(2, 40);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  for (Eigen::Index i = 0; i < h.size(); ++i) h.data()[i] = u(rng);
  const Eigen::MatrixXd v = w * h;
  NmfConfig cfg;
  cfg.k = 2;
  cfg.max_iters = 2000;
  cfg.tol = 0;
  const auto f = nmf_fit(v, cfg);
  const double err = nmf_relative_error(v, f);
  double worst_rise = 0;
  for (std::size_t i = 1; i < f.objective_trace.size(); ++i) {
    worst_rise = std::max(worst_rise, f.objective_trace[i] - f.objective_trace[i - 1]);
  }
  return {err < 1e-3 && worst_rise <= 1e-10,
          fmt::format("50x40 rank 2, {} iterations: relative error {:.3g} (< 1e-3), max objective rise {:.3g} (<= 1e-10)",
                      f.iterations, err, worst_rise)};
}

Outcome pipeline_band() {
  const auto t0 = Clock::now();
  const auto corpus = build_corpus(testkit::load_fixture_docs(), TokenizerConfig{});
  const auto emb = load_embeddings(testkit::fixture("20ng_minilm384.emb"));
  const auto result = run_pipeline(corpus, emb, PipelineConfig{});
  const auto scores = cli::evaluate_topics(corpus, result.topics, cli::EvalSettings{});
  const double secs = seconds_since(t0);
  const bool ok = scores.k >= 10 && scores.coherence >= 0.35 && scores.coherence <= 0.90 && scores.diversity >= 0.85 &&
                  secs < 60.0;
  return {ok, fmt::format("fixture: {} topics (>= 10), C_v {:.4f} in [0.35, 0.90], unique diversity {:.4f} (>= 0.85), "
                          "{:.2f}s (< 60s)",
                          scores.k, scores.coherence, scores.diversity, secs)};
}

Outcome report_arithmetic() {
  std::ifstream in(testkit::fixture("table1_records.csv"), std::ios::binary);
  const auto rows = cli::summarize(cli::read_records_csv(in), cli::ReportMetric::coherence);
  double lo = 1e9, hi = -1e9, minilm = std::nan("");
  std::size_t minilm_n = 0;
  for (const auto& r : rows) {
    if (!r.mean) continue;
    lo = std::min(lo, *r.mean);
    hi = std::max(hi, *r.mean);
    if (r.encoder == "MiniLM-L6") {
      minilm = *r.mean;
      minilm_n = r.count;
    }
  }
  const bool ok = std::abs(minilm - 0.6262) <= 1e-4 && minilm_n == 10 && hi - lo <= 0.04;
  return {ok, fmt::format("MiniLM-L6 mean {:.5f} over {} entries (0.6262 +- 1e-4); encoder mean spread {:.4f} (<= 0.04)",
                          minilm, minilm_n, hi - lo)};
}

Outcome sweep_determinism() {
  const auto dir = testkit::scratch_dir("acceptance_sweep");
  const auto cfg = testkit::write_sweep_config(dir);
  const auto run = [&](const std::string& out_dir, const std::string& workers) {
    std::ostringstream out, err;
    const int code = cli::run_cli({"sweep", "--config", cfg.string(), "--output-dir", (dir / out_dir).string(),
                                   "--workers", workers},
                                  out, err);
    if (code != 0) std::cerr << err.str();
    std::ifstream in(dir / out_dir / "records.csv", std::ios::binary);
    return std::make_pair(code, std::string(std::istreambuf_iterator<char>(in), {}));
  };
  const auto a = run("a", "1");
  const auto b = run("b", "2");
  const auto rows = static_cast<std::size_t>(std::count(a.second.begin(), a.second.end(), '\n'));
  const bool ok = a.first == 0 && b.first == 0 && rows == 5 && a.second == b.second;
  return {ok, fmt::format("two sweeps (2 datasets x 2 encoders, 1 vs 2 workers): {} data rows, records.csv {}",
                          rows == 0 ? 0 : rows - 1, a.second == b.second ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {coherence_oracle, metric_bounds,  spot_values,
                                                          lda_recovery,     nmf_rank2,      pipeline_band,
                                                          report_arithmetic, sweep_determinism};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
