#include "nldf/report.hpp"

#include <cmath>

namespace nldf {

Json to_json(const VerificationReport& r) {
  Json j{{"check", r.check},         {"attempted", r.attempted}, {"failures", r.failures},
         {"threshold", r.threshold}, {"seed", r.seed},           {"pass", r.pass()}};
  // JSON has no infinities; an empty sweep reports null.
  j["worst_margin"] = std::isfinite(r.worst_margin) ? Json(r.worst_margin) : Json(nullptr);
  if (!r.witness.is_null()) j["witness"] = r.witness;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

}  // namespace nldf
