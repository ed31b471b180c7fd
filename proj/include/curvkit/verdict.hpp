#pragma once

#include "curvkit/metric.hpp"

#include <string>
#include <vector>

namespace curvkit {

struct Verdict {
  std::string test;
  double kappa = kNaN;
  bool pass = true;
  std::string status = "pass";  // pass | fail | inconclusive
  double margin = kInf;         // signed slack of the binding inequality
  double tolerance = kVerdictTol;
  Witness witness;
  long checked = 0;
  long vacuous_count = 0;
  bool vacuous = false;    // every checked tuple was vacuous
  bool heuristic = false;  // decided by a search rather than exactly
  std::vector<double> certificate;
  std::string note;

  void settle() {
    pass = margin >= -tolerance;
    if (status != "inconclusive") status = pass ? "pass" : "fail";
    witness.margin = margin;
  }
};

// Keeps the smaller margin; equal margins resolve to the lexicographically
// smaller witness tuple, so merges are schedule independent.
inline void merge_min(Verdict& into, const Verdict& other) {
  into.checked += other.checked;
  into.vacuous_count += other.vacuous_count;
  if (other.margin < into.margin ||
      (other.margin == into.margin && other.witness.indices < into.witness.indices)) {
    into.margin = other.margin;
    into.witness = other.witness;
  }
}

}  // namespace curvkit
