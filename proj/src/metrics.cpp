#include "fislab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fislab/error.hpp"

namespace fislab {

const char* cut_algorithm_name(CutAlgorithm a) {
  return a == CutAlgorithm::data_cut ? "data_cut" : "feature_cut";
}

int RankVector::rank_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return ranks[i];
  }
  throw Error(ErrorKind::invalid_argument, "unknown feature in rank vector: " + name);
}

void RankVector::validate() const {
  if (names.size() != ranks.size()) {
    throw Error(ErrorKind::internal, "rank vector shape mismatch");
  }
  std::set<std::string> uniq(names.begin(), names.end());
  if (uniq.size() != names.size()) {
    throw Error(ErrorKind::domain, "rank vector names are not unique");
  }
  std::vector<int> sorted = ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i) + 1) {
      throw Error(ErrorKind::domain, "ranks are not a permutation of 1..n");
    }
  }
}

double stability_value(const StabilityIndexes& s, std::size_t idx) {
  switch (idx) {
    case 0: return s.rank_difference;
    case 1: return s.srcc;
    case 2: return s.canberra;
    case 3: return s.bray_curtis;
    default:
      throw Error(ErrorKind::invalid_argument, "stability index out of range");
  }
}

double auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) {
    throw Error(ErrorKind::invalid_argument, "labels/scores length mismatch");
  }
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorKind::invalid_argument, "empty input");
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += static_cast<std::size_t>(l == 1);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw Error(ErrorKind::class_exhaustion, "auc requires both classes");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks within tie groups, then the Mann-Whitney U of the positives.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) rank_sum_pos += avg_rank;
    }
    i = j;
  }
  const double u = rank_sum_pos -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

RankVector rank_from_importance(const std::vector<double>& importance,
                                const std::vector<std::string>& names,
                                std::string source) {
  if (importance.size() != names.size()) {
    throw Error(ErrorKind::invalid_argument, "importance/names length mismatch");
  }
  for (double v : importance) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::domain, "non-finite importance value");
    }
  }
  const std::size_t n = importance.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&importance](std::size_t a, std::size_t b) {
    if (importance[a] != importance[b]) return importance[a] > importance[b];
    return a < b;  // ties: lower index ranks first
  });
  RankVector rv;
  rv.names = names;
  rv.ranks.resize(n);
  rv.source = std::move(source);
  for (std::size_t pos = 0; pos < n; ++pos) {
    rv.ranks[order[pos]] = static_cast<int>(pos) + 1;
  }
  return rv;
}

RankVector project_reference_rank(const RankVector& ref,
                                  const std::vector<std::string>& surviving) {
  if (surviving.empty()) {
    throw Error(ErrorKind::invalid_argument, "surviving set is empty");
  }
  std::set<std::string> keep(surviving.begin(), surviving.end());
  if (keep.size() != surviving.size()) {
    throw Error(ErrorKind::invalid_argument, "surviving names are not unique");
  }
  for (const auto& name : keep) {
    (void)ref.rank_of(name);  // throws on unknown
  }
  // Restrict in ref order, then compress ranks to 1..m keeping relative order.
  std::vector<std::pair<int, std::size_t>> kept;  // (old rank, position in ref)
  RankVector out;
  out.source = ref.source;
  for (std::size_t i = 0; i < ref.names.size(); ++i) {
    if (keep.count(ref.names[i])) {
      out.names.push_back(ref.names[i]);
      kept.emplace_back(ref.ranks[i], out.names.size() - 1);
    }
  }
  std::sort(kept.begin(), kept.end());
  out.ranks.resize(out.names.size());
  for (std::size_t pos = 0; pos < kept.size(); ++pos) {
    out.ranks[kept[pos].second] = static_cast<int>(pos) + 1;
  }
  return out;
}

StabilityIndexes stability_indexes(const RankVector& ref, const RankVector& next) {
  if (ref.size() != next.size()) {
    throw Error(ErrorKind::invalid_argument, "rank vectors differ in size");
  }
  const std::size_t n = ref.size();
  std::map<std::string, int> next_rank;
  for (std::size_t i = 0; i < n; ++i) next_rank[next.names[i]] = next.ranks[i];

  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double canberra = 0.0;
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = next_rank.find(ref.names[i]);
    if (it == next_rank.end()) {
      throw Error(ErrorKind::invalid_argument,
                  "mismatched name sets: " + ref.names[i] + " missing");
    }
    const double r = ref.ranks[i];
    const double s = it->second;
    const double d = std::fabs(r - s);
    abs_sum += d;
    sq_sum += (r - s) * (r - s);
    canberra += d / (r + s);
    pair_sum += r + s;
  }

  StabilityIndexes out;
  out.rank_difference = abs_sum / static_cast<double>(n);
  out.srcc = n >= 2 ? 1.0 - 6.0 * sq_sum / (static_cast<double>(n) *
                                            (static_cast<double>(n) *
                                                 static_cast<double>(n) -
                                             1.0))
                    : 1.0;
  out.canberra = canberra;
  out.bray_curtis = abs_sum / pair_sum;
  return out;
}

}  // namespace fislab
