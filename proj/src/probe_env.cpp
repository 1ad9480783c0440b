#include "oblivmatch/probe_env.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace oblivmatch {

namespace {

void require_shape(const BipartiteInstance& instance, const BitMatrix& bits) {
  if (bits.rows() != instance.n_left() || bits.cols() != instance.n_right()) {
    std::ostringstream os;
    os << "dimension mismatch: bits are " << bits.rows() << "x" << bits.cols()
       << ", instance is " << instance.n_left() << "x" << instance.n_right();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

ProbeEnv::ProbeEnv(const BipartiteInstance& instance, const Realization& realization,
                   std::uint64_t trial_seed)
    : ProbeEnv(instance, realize_bits(realization, trial_seed)) {}

ProbeEnv::ProbeEnv(const BipartiteInstance& instance, BitMatrix bits)
    : instance_(&instance), bits_(std::move(bits)) {
  require_shape(instance, bits_);
  probed_ = BitMatrix::Constant(instance.n_left(), instance.n_right(), false);
  match_of_left_.assign(static_cast<std::size_t>(instance.n_left()), -1);
  match_of_right_.assign(static_cast<std::size_t>(instance.n_right()), -1);
}

namespace {

std::string pair_str(int left, int right) {
  std::ostringstream os;
  os << "(" << left << "," << right << ")";
  return os.str();
}

}  // namespace

ProbeOutcome ProbeEnv::probe(int left, int right) {
  if (left < 0 || left >= n_left() || right < 0 || right >= n_right())
    throw std::invalid_argument("probe index out of range");
  if (left_matched(left) || right_matched(right))
    throw ProbeOfMatchedVertex("probe of matched vertex at " + pair_str(left, right));
  if (probed_(left, right)) throw DuplicateProbe("duplicate probe of " + pair_str(left, right));
  probed_(left, right) = true;

  const bool present = bits_(left, right);
  log_.push_back(ProbeRecord{static_cast<int>(log_.size()), left, right,
                             present ? ProbeOutcome::Matched : ProbeOutcome::EdgeAbsent});
  if (present) {
    match_of_left_[static_cast<std::size_t>(left)] = right;
    match_of_right_[static_cast<std::size_t>(right)] = left;
    committed_.emplace_back(left, right);
    ++matched_pairs_;
    return ProbeOutcome::Matched;
  }
  return ProbeOutcome::EdgeAbsent;
}

Matching ProbeEnv::final_matching() const {
  Matching m;
  m.pairs = committed_;
  std::sort(m.pairs.begin(), m.pairs.end());
  m.total_weight = matching_weight(*instance_, m.pairs);
  return m;
}

void probe_log_csv(std::ostream& os, long trial, const std::vector<ProbeRecord>& log) {
  for (const auto& rec : log) {
    os << trial << ',' << rec.step << ',' << rec.left << ',' << rec.right << ','
       << (rec.outcome == ProbeOutcome::Matched ? "matched" : "absent") << '\n';
  }
}

}  // namespace oblivmatch
