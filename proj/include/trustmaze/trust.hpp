#pragma once

#include <array>
#include <map>
#include <vector>

#include "trustmaze/core.hpp"
#include "trustmaze/error.hpp"
#include "trustmaze/mission.hpp"

namespace trustmaze {

enum class Colour : uint8_t { Green, Yellow, Orange, Red };
enum class Side : uint8_t { Performer, Supporter };

// green = 3, yellow = 2, orange = 1, red = 0; identical for both sides.
int rating_score(Colour colour, Side side);

const char* to_string(Colour c);
const char* to_string(Side s);

// Static capability scores per (role, purpose function), 0..3.
class CapabilityMatrix {
 public:
  static CapabilityMatrix defaults();

  int score(Role role, PurposeFunction fn, Side side) const;
  void set_score(Role role, PurposeFunction fn, Side side, int score);
  int total(Role role, Side side) const;
  double norm(Role role, PurposeFunction fn) const {  // performer score scaled to [0,1]
    return score(role, fn, Side::Performer) / 3.0;
  }

 private:
  std::array<std::array<int, 4>, 4> performer_{};  // [function][role]
  std::array<std::array<int, 4>, 4> supporter_{};
};

// Laplace-smoothed success frequency; prior sits at 0.5.
struct PredictabilityCell {
  int successes = 0;
  int trials = 0;

  double estimate() const { return (successes + 1.0) / (trials + 2.0); }
};

struct IntegrityCell {
  double score = 1.0;
  bool hard_violation = false;
};

struct TrustWeights {
  double capability = 1.0 / 3.0;
  double predictability = 1.0 / 3.0;
  double integrity = 1.0 / 3.0;
};

// throws BadWeights unless non-negative and summing to 1
void validate_weights(const TrustWeights& w);
double composite_trust(double capability_norm, double predictability, double integrity,
                       const TrustWeights& weights);

struct TrustLadder {
  std::vector<double> thresholds = {0.2, 0.4, 0.6, 0.8};

  // rung = number of thresholds at or below the score (threshold-inclusive)
  int rung(double score) const;
  int max_rung() const { return static_cast<int>(thresholds.size()); }
  std::vector<std::string> validate() const;  // strictly ascending, within (0,1)
};

struct TrustRecord {
  double capability_norm = 0.0;
  double predictability = 0.5;
  double integrity = 1.0;
  double composite = 0.0;
  int rung = 0;
};

struct TrustConfig {
  TrustWeights weights;
  TrustLadder ladder;
  double soft_penalty = 0.8;
  double recovery = 1.0;  // per-tick integrity multiplier, 1.0 = no recovery
};

// Observer-specific trust state for every (observer, target) pair.
// Predictability is tracked per function; integrity is per pair.
class TrustMatrix {
 public:
  const PredictabilityCell& predictability(int observer, int target, PurposeFunction fn) const;
  const IntegrityCell& integrity(int observer, int target) const;

  // trials+1, successes+success; returns the new estimate
  double update_predictability(int observer, int target, PurposeFunction fn, bool success);
  void update_integrity(int observer, int target, const Violation& violation, double soft_penalty);
  // score <- min(1, score * multiplier) unless a hard violation pinned it at 0
  void apply_recovery(int observer, int target, double multiplier);

  void seed_predictability(int observer, int target, PurposeFunction fn, int successes, int trials);
  void seed_integrity(int observer, int target, double score);

  bool hard_violation(int observer, int target) const;

  TrustRecord record(int observer, int target, Role target_role, PurposeFunction fn,
                     const CapabilityMatrix& capability, const TrustConfig& config) const;
  // weakest-function view of a pair: the minimum composite over the four
  // purpose functions (ties to the earliest function in declaration order)
  TrustRecord pair_record(int observer, int target, Role target_role,
                          const CapabilityMatrix& capability, const TrustConfig& config) const;

 private:
  std::map<std::tuple<int, int, PurposeFunction>, PredictabilityCell> predictability_;
  std::map<std::pair<int, int>, IntegrityCell> integrity_;
};

}  // namespace trustmaze
