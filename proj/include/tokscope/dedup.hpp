// Copyright 2026 The tokscope Authors
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

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "tokscope/corpus.hpp"
#include "tokscope/minhash.hpp"
#include "tokscope/rng.hpp"

namespace tokscope {

struct DedupParams {
  size_t shingle_k = 5;     // word 5-grams after casefolding
  uint32_t num_perm = 128;  // with b=16, r=8: LSH threshold ~ (1/16)^(1/8) ~ 0.71
  uint64_t seed = 0;
  uint32_t bands = 16;
  uint32_t rows = 8;
  double jaccard_confirm = 0.8;
  bool per_language = false;  // restrict candidate pairs to same-language docs
  unsigned threads = 1;

  void validate() const {
    if (shingle_k < 1) throw UsageError("dedup: shingle_k must be >= 1");
    if (bands * rows != num_perm)
      throw UsageError("dedup: bands * rows must equal num_perm");
    if (jaccard_confirm < 0.0 || jaccard_confirm > 1.0)
      throw UsageError("dedup: jaccard_confirm must be in [0,1]");
  }
};

struct DedupCluster {
  std::string kept;                  // earliest document in corpus order
  std::vector<std::string> removed;  // the rest of the cluster
};

struct DedupReport {
  uint64_t candidate_pairs = 0;
  uint64_t confirmed_pairs = 0;
  std::vector<DedupCluster> clusters;
  uint64_t removed_docs = 0;
};

struct DedupResult {
  Corpus corpus;
  DedupReport report;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  size_t find(size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as the root so cluster resolution keys on
  // corpus position, not merge order.
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<size_t> parent_;
};

/// Runs fn(begin, end) over contiguous shards on `threads` workers.
/// Shard boundaries depend only on (n, threads), so any reduction done
/// in shard order is identical to the sequential result.
template <typename Fn>
void parallel_shards(size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(size_t{0}, n);
    return;
  }
  const unsigned workers = std::min<unsigned>(threads, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const size_t begin = w * chunk;
    const size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// MinHash-LSH near-duplicate removal with an exact-Jaccard
/// confirmation pass. Candidates come from LSH banding; a pair joins a
/// cluster only if the exact Jaccard of the shingle sets reaches
/// jaccard_confirm, so every reported pair is a true near-duplicate.
/// Within each cluster the earliest document in corpus order is kept.
inline DedupResult dedup(const Corpus& corpus, const DedupParams& params) {
  params.validate();
  DedupResult result;

  std::vector<ShingleSet> sets(corpus.size());
  detail::parallel_shards(corpus.size(), params.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) sets[i] = shingles(corpus[i].text, params.shingle_k);
  });
  std::vector<MinHashSignature> sigs(corpus.size());
  detail::parallel_shards(corpus.size(), params.threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) sigs[i] = minhash(sets[i], params.num_perm, params.seed);
  });

  auto candidates = lsh_candidates(sigs, params.bands, params.rows);
  if (params.per_language) {
    std::erase_if(candidates, [&](const auto& p) {
      return corpus[p.first].language != corpus[p.second].language;
    });
  }
  result.report.candidate_pairs = candidates.size();

  detail::UnionFind uf(corpus.size());
  for (const auto& [a, b] : candidates) {
    if (exact_jaccard(sets[a], sets[b]) >= params.jaccard_confirm) {
      ++result.report.confirmed_pairs;
      uf.unite(a, b);
    }
  }

  std::map<size_t, std::vector<size_t>> clusters;  // root -> members, both in corpus order
  for (size_t i = 0; i < corpus.size(); ++i) clusters[uf.find(i)].push_back(i);

  std::vector<char> removed(corpus.size(), 0);
  for (const auto& [root, members] : clusters) {
    if (members.size() < 2) continue;
    DedupCluster cluster;
    cluster.kept = corpus[members.front()].id;
    for (size_t m = 1; m < members.size(); ++m) {
      cluster.removed.push_back(corpus[members[m]].id);
      removed[members[m]] = 1;
    }
    result.report.removed_docs += cluster.removed.size();
    result.report.clusters.push_back(std::move(cluster));
  }

  result.corpus.reserve(corpus.size() - result.report.removed_docs);
  for (size_t i = 0; i < corpus.size(); ++i)
    if (!removed[i]) result.corpus.push_back(corpus[i]);
  return result;
}

/// Uniform seeded permutation (Fisher-Yates over xoshiro256**).
inline Corpus shuffle(const Corpus& corpus, uint64_t seed) {
  Corpus out = corpus;
  Xoshiro256 rng(seed);
  fisher_yates(out, rng);
  return out;
}

}  // namespace tokscope
