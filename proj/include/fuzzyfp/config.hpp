#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyfp/distances.hpp"
#include "fuzzyfp/dp_solver.hpp"
#include "fuzzyfp/errors.hpp"
#include "fuzzyfp/implicit.hpp"
#include "fuzzyfp/metric_core.hpp"
#include "fuzzyfp/pairs.hpp"
#include "fuzzyfp/solver.hpp"
#include "fuzzyfp/verifier.hpp"

namespace fuzzyfp {

/// Config problem located in a file: "<file>:<line>: <message>".
class ConfigError : public InputError {
public:
    ConfigError(std::string file, int line, const std::string& message);

    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

struct IniEntry {
    std::string value;
    int line = 0;
};

struct IniSection {
    int line = 0;
    std::map<std::string, IniEntry, std::less<>> entries;
};

/// "[section]" headers, "key = value" lines, full-line comments starting
/// with '#' or ';'. Duplicate sections or keys are errors.
struct IniDocument {
    std::string file;
    std::map<std::string, IniSection, std::less<>> sections;
};

IniDocument parse_ini(std::string_view text, const std::string& file);

/// Command-line values; each one set here replaces the file's value.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::size_t> grid;
    std::optional<double> tol;
    std::optional<std::vector<double>> t_grid;
};

struct AxiomSettings {
    std::size_t random_triples = 1000;
    std::optional<double> remark3_r;
};

struct PsiSettings {
    ConditionVariant variant = ConditionVariant::as_printed;
    std::size_t grid_n = 21;
};

struct TheoremSettings {
    EAPair ea_pair = EAPair::AF;
    ContainmentDirection containment = ContainmentDirection::G_in_A;
    bool containment_closure = false;
    ClosedTarget closed = ClosedTarget::A;
    ClosedOptions closed_options;
    CommutationVariant commutation = CommutationVariant::weakly_compatible;
    double R = 1.0;
};

struct DPSettings {
    double tol = 1e-7;
    std::size_t max_iter = 1000;
    std::optional<ValueSequence> r_seq;
    std::optional<ValueSequence> p_seq;
    std::function<double(double)> lambda;
    std::string lambda_source;
    std::size_t random_pairs = 20;
};

/// Everything a command may need, constructed from the sections present.
/// Commands call require_* to demand a component.
struct RunConfig {
    std::string file;
    std::uint64_t seed = 0;
    int jobs = 1;

    std::optional<Carrier> carrier;
    std::optional<FuzzyMetric> metric;
    std::optional<MapQuadruple> quad;
    std::optional<FamilySet> families;
    std::optional<PsiFunction> psi;
    std::optional<AlteringDistance> phi;
    std::optional<ContractionSpec> contraction;
    ContractionPlan plan;
    std::optional<SequenceSpec> seq_x;
    std::optional<SequenceSpec> seq_y;

    AxiomSettings axioms;
    PsiSettings psi_settings;
    TheoremSettings theorem;
    TheoremTolerances tolerances;
    double quad_tol = kDefaultQuadTol;

    std::optional<DPProblem> dp;
    DPSettings dp_settings;

    const FuzzyMetric& require_metric() const;
    const MapQuadruple& require_quad() const;
    const PsiFunction& require_psi() const;
    const ContractionSpec& require_contraction() const;
    const SequenceSpec& require_sequence() const;
    const DPProblem& require_dp() const;

    TheoremConfig theorem_config() const;
};

RunConfig load_config_text(std::string_view text, const std::string& file, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

/// "0.1,0.5,1" -> {0.1, 0.5, 1}; "a:h:b" -> a, a+h, .., b.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace fuzzyfp
