#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "json.hpp"

namespace nldf {

using Json = nlohmann::json;

/// Outcome of a batch of margin checks. Margins are normalized by the
/// check's scale; a check fails when its normalized margin drops below
/// -threshold. A failure always carries a replayable witness.
struct VerificationReport {
  std::string check;
  std::size_t attempted = 0;
  std::size_t failures = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double threshold = 0.0;
  std::uint64_t seed = 0;
  Json witness;  // inputs of the worst (or first failing) sample
  Json details = Json::object();

  bool pass() const { return failures == 0; }

  /// Records one normalized margin; the witness tracks the worst sample.
  template <class WitnessFn>
  void record(double normalized_margin, WitnessFn&& make_witness) {
    ++attempted;
    if (normalized_margin < -threshold) ++failures;
    if (normalized_margin < worst_margin) {
      worst_margin = normalized_margin;
      witness = make_witness();
    }
  }

  void merge(const VerificationReport& other) {
    attempted += other.attempted;
    failures += other.failures;
    if (other.worst_margin < worst_margin) {
      worst_margin = other.worst_margin;
      witness = other.witness;
    }
  }
};

Json to_json(const VerificationReport& r);

}  // namespace nldf
