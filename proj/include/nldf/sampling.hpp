#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nldf/functional.hpp"
#include "nldf/graph.hpp"

namespace nldf {

using Rng = std::mt19937_64;

/// Independent deterministic stream for (seed, index).
Rng make_stream(std::uint64_t seed, std::uint64_t index);

double uniform(Rng& rng, double lo, double hi);

/// Entries uniform in [-scale, scale].
FunctionVector random_vector(std::size_t n, Rng& rng, double scale = 1.0);

/// Random vector that, for functionals with a constrained domain, lands in
/// the domain most of the time (interior or exactly on the boundary) and
/// outside it otherwise.
FunctionVector random_domain_vector(const Functional& e, Rng& rng, double scale = 1.0);

/// Largest t in [0, 1] with t u in dom E, times u.
FunctionVector scale_into_domain(const Functional& e, const FunctionVector& u);

/// Connected graph: random spanning tree plus `extra_edges` random chords.
/// Measures and weights uniform in the given ranges.
MeasuredGraph random_connected_graph(std::size_t n, std::size_t extra_edges, Rng& rng,
                                     double measure_lo = 0.5, double measure_hi = 1.5, double weight_lo = 0.5,
                                     double weight_hi = 1.5);

/// Random nonempty node subset of size in [1, max_size].
std::vector<std::size_t> random_subset(std::size_t n, std::size_t max_size, Rng& rng);

/// The symmetric catalog instances used by the verification sweeps.
std::vector<Functional> symmetric_catalog(const GraphPtr& g);

/// Quasilinear members of the symmetric catalog.
std::vector<Functional> quasilinear_catalog(const GraphPtr& g);

}  // namespace nldf
