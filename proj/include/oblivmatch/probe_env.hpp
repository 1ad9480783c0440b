#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "oblivmatch/types.hpp"

namespace oblivmatch {

enum class ProbeOutcome { Matched, EdgeAbsent };

struct ProbeRecord {
  int step;
  int left;
  int right;
  ProbeOutcome outcome;
};

struct ProbeError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Probing a pair with an already-matched endpoint. The model only allows
/// probes of unmatched pairs, so this is a bug in the calling algorithm.
struct ProbeOfMatchedVertex : ProbeError {
  using ProbeError::ProbeError;
};

/// Probing the same pair twice within one trial.
struct DuplicateProbe : ProbeError {
  using ProbeError::ProbeError;
};

/// Query-commit environment for a single trial. Edge bits are sampled once
/// at construction; a probe of a present pair commits it to the matching
/// irrevocably. Algorithms see probe outcomes and matched flags, never the
/// bits themselves. The instance must outlive the environment.
class ProbeEnv {
 public:
  ProbeEnv(const BipartiteInstance& instance, const Realization& realization,
           std::uint64_t trial_seed);
  ProbeEnv(const BipartiteInstance& instance, BitMatrix bits);

  /// Probes (left, right). If the edge exists, the pair is committed and
  /// both endpoints are flagged matched. Throws ProbeOfMatchedVertex or
  /// DuplicateProbe on contract violations.
  ProbeOutcome probe(int left, int right);

  bool left_matched(int u) const { return match_of_left_[static_cast<std::size_t>(u)] >= 0; }
  bool right_matched(int v) const { return match_of_right_[static_cast<std::size_t>(v)] >= 0; }
  int matched_pairs() const { return matched_pairs_; }

  Eigen::Index n_left() const { return instance_->n_left(); }
  Eigen::Index n_right() const { return instance_->n_right(); }

  /// Committed matching so far, pairs sorted by left index, weight summed
  /// from the instance.
  Matching final_matching() const;

  const std::vector<ProbeRecord>& log() const { return log_; }

 private:
  const BipartiteInstance* instance_;
  BitMatrix bits_;
  BitMatrix probed_;
  std::vector<int> match_of_left_;   // right index or -1
  std::vector<int> match_of_right_;  // left index or -1
  std::vector<std::pair<int, int>> committed_;
  std::vector<ProbeRecord> log_;
  int matched_pairs_ = 0;
};

/// CSV rows "trial,step,u,v,outcome", one per probe. No header.
void probe_log_csv(std::ostream& os, long trial, const std::vector<ProbeRecord>& log);

}  // namespace oblivmatch
