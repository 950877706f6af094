#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>

#include "cospec/cocycle.hpp"
#include "cospec/grassmann_dynamics.hpp"
#include "cospec/holonomy.hpp"
#include "cospec/hyperplane.hpp"
#include "cospec/lyapunov.hpp"
#include "cospec/simplicity.hpp"

namespace cospec {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "cocycle-spectra-report/1";
inline constexpr const char* kSpecSchema = "cocycle-spec/1";

using Json = nlohmann::ordered_json;

// Cocycle spec file: matrices per symbol with exact "p/q" string entries or
// plain numbers, a Markov or Bernoulli measure, and optional periodic and
// homoclinic words.
struct SpecFile {
  CocycleSpec spec;
  std::optional<std::vector<int>> periodic_word;
  std::optional<std::vector<int>> homoclinic_insert;
  long homoclinic_l = 0;
};

SpecFile load_spec_file(const std::string& path);
SpecFile parse_spec_json(const Json& j);

Json to_json(const SpectrumEstimate& est);
Json to_json(const ZorichSpectrumResult& res);
Json to_json(const SimplicityVerdict& verdict);
Json to_json(const InducedSystem& ind);
Json to_json(const GapDiagnostic& gd);
Json to_json(const BunchingReport& rep);
Json to_json(const HolonomyMap& h);
Json to_json(const DiracTrace& trace);
Json to_json(const MonoidReport& rep);
Json to_json(const VandermondeResult& v);
Json to_json(const InducingReport& rep);
Json to_json(const AdjointReport& rep);

// CSV exports; the column order is fixed and versioned in a header comment.
std::string zorich_trace_csv(const QrTrace& trace);
std::string dirac_trace_csv(const DiracTrace& dirac, const EccentricityTrace& ecc,
                            const TrackingTrace& tracking);
std::string batch_exponents_csv(const SpectrumEstimate& est);
// One row per accelerated induction step: index, type, n, log norm of the
// composite matrix, then the length vector.
std::string zorich_orbit_trace_csv(const PermutationPair& start, long steps, RandomSource rng,
                                   long step_cap = 1000000L);

}  // namespace cospec
