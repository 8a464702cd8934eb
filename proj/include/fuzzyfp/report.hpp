#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "fuzzyfp/dp_solver.hpp"
#include "fuzzyfp/implicit.hpp"
#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/pairs.hpp"
#include "fuzzyfp/solver.hpp"
#include "fuzzyfp/verifier.hpp"

namespace fuzzyfp {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "fuzzyfp";
inline constexpr std::string_view kSchemaVersion = "1.0";

Json to_json(const Coordinates& c);
Json to_json(const AxiomCheck& c);
Json to_json(const AxiomReport& r);
Json to_json(const Remark3Result& r);
Json to_json(const ConditionResult& c);
Json to_json(const PsiReport& r);
Json to_json(const VerificationReport& r);
Json to_json(const CoincidenceResult& r);
Json to_json(const PredicateReport& r);
Json to_json(const TailStats& t);
Json to_json(const EAReport& r);
Json to_json(const CompatibilityReport& r);
Json to_json(const ContainmentReport& r);
Json to_json(const ClosedReport& r);
Json to_json(const FamilyCommutingReport& r);
Json to_json(const FixedPointCertificate& c);
Json to_json(const FixedPointSearch& s);
Json to_json(const RefineOutcome& r);
Json to_json(const UniquenessScan& u);
Json to_json(const TheoremReport& r);
Json to_json(const IterationResult& r);
Json to_json(const SystemReport& r);
Json to_json(const TailCondition& c);
Json to_json(const ThetaCondition& c);
Json to_json(const Theorem53Report& r);

/// Top-level document shared by every command.
Json make_envelope(std::string_view command, int exit_code, Json results);
Json make_error_envelope(std::string_view command, std::string_view kind, std::string_view message);

/// Serialized form written by the CLI: two-space indent plus newline.
std::string dump_report(const Json& doc);

}  // namespace fuzzyfp
