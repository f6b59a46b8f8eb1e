#include "trustmaze/trust.hpp"

#include <algorithm>
#include <cmath>

namespace trustmaze {

int rating_score(Colour colour, Side side) {
  (void)side;
  switch (colour) {
    case Colour::Green: return 3;
    case Colour::Yellow: return 2;
    case Colour::Orange: return 1;
    case Colour::Red: return 0;
  }
  return 0;
}

const char* to_string(Colour c) {
  switch (c) {
    case Colour::Green: return "green";
    case Colour::Yellow: return "yellow";
    case Colour::Orange: return "orange";
    case Colour::Red: return "red";
  }
  return "?";
}

const char* to_string(Side s) { return s == Side::Performer ? "performer" : "supporter"; }

CapabilityMatrix CapabilityMatrix::defaults() {
  CapabilityMatrix m;
  // rows: move, help, gather, communicate; columns: Leader, Collector, GateUser, Neutral
  m.performer_ = {{{3, 3, 3, 3}, {0, 1, 0, 3}, {0, 3, 0, 0}, {3, 2, 2, 3}}};
  m.supporter_ = {{{0, 0, 0, 0}, {0, 1, 0, 3}, {0, 0, 0, 0}, {2, 2, 2, 2}}};
  return m;
}

int CapabilityMatrix::score(Role role, PurposeFunction fn, Side side) const {
  const auto& table = side == Side::Performer ? performer_ : supporter_;
  return table[static_cast<int>(fn)][static_cast<int>(role)];
}

void CapabilityMatrix::set_score(Role role, PurposeFunction fn, Side side, int score) {
  if (score < 0 || score > 3)
    throw SimError(ErrorCode::InvalidState, "capability score must be 0..3");
  auto& table = side == Side::Performer ? performer_ : supporter_;
  table[static_cast<int>(fn)][static_cast<int>(role)] = score;
}

int CapabilityMatrix::total(Role role, Side side) const {
  int sum = 0;
  for (PurposeFunction fn : kAllPurposeFunctions) sum += score(role, fn, side);
  return sum;
}

void validate_weights(const TrustWeights& w) {
  if (w.capability < 0 || w.predictability < 0 || w.integrity < 0)
    throw SimError(ErrorCode::BadWeights, "weights must be non-negative");
  double sum = w.capability + w.predictability + w.integrity;
  if (std::abs(sum - 1.0) > 1e-9)
    throw SimError(ErrorCode::BadWeights, "weights must sum to 1, got " + std::to_string(sum));
}

double composite_trust(double capability_norm, double predictability, double integrity,
                       const TrustWeights& weights) {
  validate_weights(weights);
  return weights.capability * capability_norm + weights.predictability * predictability +
         weights.integrity * integrity;
}

int TrustLadder::rung(double score) const {
  int r = 0;
  for (double t : thresholds)
    if (t <= score) ++r;
  return r;
}

std::vector<std::string> TrustLadder::validate() const {
  std::vector<std::string> problems;
  if (thresholds.empty()) problems.push_back("ladder needs at least one threshold");
  for (size_t i = 0; i < thresholds.size(); ++i) {
    if (thresholds[i] <= 0.0 || thresholds[i] >= 1.0)
      problems.push_back("threshold " + std::to_string(thresholds[i]) + " outside (0,1)");
    if (i > 0 && thresholds[i] <= thresholds[i - 1])
      problems.push_back("thresholds must be strictly ascending");
  }
  return problems;
}

namespace {
const PredictabilityCell kFreshPredictability;
const IntegrityCell kFreshIntegrity;
}  // namespace

const PredictabilityCell& TrustMatrix::predictability(int observer, int target,
                                                      PurposeFunction fn) const {
  auto it = predictability_.find({observer, target, fn});
  return it == predictability_.end() ? kFreshPredictability : it->second;
}

const IntegrityCell& TrustMatrix::integrity(int observer, int target) const {
  auto it = integrity_.find({observer, target});
  return it == integrity_.end() ? kFreshIntegrity : it->second;
}

double TrustMatrix::update_predictability(int observer, int target, PurposeFunction fn,
                                          bool success) {
  auto& cell = predictability_[{observer, target, fn}];
  cell.trials += 1;
  if (success) cell.successes += 1;
  return cell.estimate();
}

void TrustMatrix::update_integrity(int observer, int target, const Violation& violation,
                                   double soft_penalty) {
  auto& cell = integrity_[{observer, target}];
  if (violation.severity == Hardness::Hard) {
    cell.score = 0.0;
    cell.hard_violation = true;
  } else if (!cell.hard_violation) {
    cell.score = std::min(1.0, cell.score * soft_penalty);
  }
}

void TrustMatrix::apply_recovery(int observer, int target, double multiplier) {
  auto& cell = integrity_[{observer, target}];
  if (cell.hard_violation) return;
  cell.score = std::min(1.0, cell.score * multiplier);
}

void TrustMatrix::seed_predictability(int observer, int target, PurposeFunction fn, int successes,
                                      int trials) {
  if (successes < 0 || trials < 0 || successes > trials)
    throw SimError(ErrorCode::InvalidState, "need 0 <= successes <= trials");
  predictability_[{observer, target, fn}] = {successes, trials};
}

void TrustMatrix::seed_integrity(int observer, int target, double score) {
  if (score < 0.0 || score > 1.0)
    throw SimError(ErrorCode::InvalidState, "integrity score must be in [0,1]");
  integrity_[{observer, target}] = {score, false};
}

bool TrustMatrix::hard_violation(int observer, int target) const {
  return integrity(observer, target).hard_violation;
}

TrustRecord TrustMatrix::record(int observer, int target, Role target_role, PurposeFunction fn,
                                const CapabilityMatrix& capability,
                                const TrustConfig& config) const {
  TrustRecord r;
  r.capability_norm = capability.norm(target_role, fn);
  r.predictability = predictability(observer, target, fn).estimate();
  r.integrity = integrity(observer, target).score;
  r.composite = composite_trust(r.capability_norm, r.predictability, r.integrity, config.weights);
  r.rung = config.ladder.rung(r.composite);
  return r;
}

TrustRecord TrustMatrix::pair_record(int observer, int target, Role target_role,
                                     const CapabilityMatrix& capability,
                                     const TrustConfig& config) const {
  TrustRecord weakest;
  bool first = true;
  for (PurposeFunction fn : kAllPurposeFunctions) {
    TrustRecord r = record(observer, target, target_role, fn, capability, config);
    if (first || r.composite < weakest.composite) {
      weakest = r;
      first = false;
    }
  }
  return weakest;
}

}  // namespace trustmaze
