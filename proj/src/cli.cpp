#include "repsel/cli.hpp"

#include "repsel/axioms.hpp"
#include "repsel/errors.hpp"
#include "repsel/generators.hpp"
#include "repsel/io.hpp"
#include "repsel/mechanisms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace repsel {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

// Shared flag storage --------------------------------------------------------------

struct MechanismFlags {
  std::string mechanism;
  std::string candidates;
  std::optional<std::size_t> k;
  std::string tie = "lex";
  std::string fallback = "abstain";
  std::string method = "exact";
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> guard;
  unsigned workers = 0;
};

struct OutputFlags {
  std::string format = "table";
};

void add_mechanism_flags(CLI::App* cmd, MechanismFlags& f, bool with_method) {
  cmd->add_option("--mechanism", f.mechanism, "direct|fptp|proxy|liquid|sortition")
      ->required()
      ->check(CLI::IsMember({"direct", "fptp", "proxy", "liquid", "sortition"}));
  cmd->add_option("--candidates", f.candidates, "comma-separated candidate labels");
  cmd->add_option("--k", f.k, "body size (sortition)");
  cmd->add_option("--tie", f.tie, "FPTP tie rule")->check(CLI::IsMember({"lex", "split"}));
  cmd->add_option("--fallback", f.fallback, "zero-mass rows")->check(CLI::IsMember({"abstain", "uniform"}));
  if (with_method) {
    cmd->add_option("--method", f.method, "exact|mc")->check(CLI::IsMember({"exact", "mc"}));
    cmd->add_option("--samples", f.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
  }
  cmd->add_option("--guard", f.guard, "maximum number of enumerated profiles");
  cmd->add_option("--workers", f.workers, "worker threads (0 = all cores)");
}

void add_format_flag(CLI::App* cmd, OutputFlags& o) {
  cmd->add_option("--format", o.format, "table|json|csv")->check(CLI::IsMember({"table", "json", "csv"}));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t resolve_guard(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("REPSEL_GUARD"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidSpec(std::string("REPSEL_GUARD is not an integer: ") + env);
    }
  }
  return kDefaultGuard;
}

CandidateSet parse_candidates(const std::string& text, const RepresentationMatrix& gamma) {
  std::vector<AgentIndex> members;
  for (const auto& label : split_list(text)) members.push_back(gamma.index_of(label));
  return CandidateSet::from(std::move(members), gamma.n());
}

MechanismSpec build_spec(const MechanismFlags& f, const RepresentationMatrix& gamma) {
  MechanismSpec spec;
  spec.kind = parse_mechanism_kind(f.mechanism);
  spec.k = f.k;
  if (spec.kind == MechanismKind::FirstPastThePost && !spec.k) spec.k = 1;
  if (!f.candidates.empty()) spec.candidates = parse_candidates(f.candidates, gamma);
  spec.tie_rule = f.tie == "split" ? TieRule::EqualSplit : TieRule::Lexicographic;
  spec.fallback = f.fallback == "uniform" ? Fallback::Uniform : Fallback::Abstain;
  if (f.method == "mc") spec.monte_carlo = MonteCarlo{f.samples, f.seed};
  spec.enumeration.guard = resolve_guard(f.guard);
  spec.enumeration.workers = f.workers;

  if (spec.is_closed() && !spec.candidates) {
    throw InvalidSpec("--mechanism " + f.mechanism + " requires --candidates");
  }
  if (spec.kind == MechanismKind::Sortition && !spec.k) throw InvalidSpec("--mechanism sortition requires --k");
  spec.validate(gamma.n());
  return spec;
}

// JSON helpers ------------------------------------------------------------------------

Json exact_array(std::span<const Rational> values) {
  Json a = Json::array();
  for (const auto& v : values) a.push_back(to_string(v));
  return a;
}

Json display_array(std::span<const Rational> values) {
  Json a = Json::array();
  for (const auto& v : values) a.push_back(truncate_2dp(v));
  return a;
}

Json label_array(std::span<const AgentIndex> agents, const RepresentationMatrix& gamma) {
  Json a = Json::array();
  for (auto i : agents) a.push_back(gamma.label(i));
  return a;
}

Json metadata(const std::string& command, const std::string& method, std::optional<std::uint64_t> seed) {
  Json m;
  m["tool"] = "repsel";
  m["version"] = kVersion;
  m["command"] = command;
  m["method"] = method;
  m["seed"] = seed ? Json(*seed) : Json(nullptr);
  return m;
}

Json mechanism_json(const MechanismSpec& spec, const RepresentationMatrix& gamma) {
  Json m;
  m["kind"] = to_string(spec.kind);
  if (spec.k) m["k"] = *spec.k;
  if (spec.candidates) m["candidates"] = label_array(spec.candidates->members(), gamma);
  if (spec.kind == MechanismKind::FirstPastThePost) {
    m["tie"] = spec.tie_rule == TieRule::EqualSplit ? "split" : "lex";
  }
  if (spec.is_closed()) m["fallback"] = spec.fallback == Fallback::Uniform ? "uniform" : "abstain";
  return m;
}

Json verdict_json(const AxiomReport& report, const RepresentationMatrix& gamma) {
  Json j;
  j["verdict"] = to_string(report.verdict);
  Json v = Json::array();
  for (const auto& violation : report.violations) {
    v.push_back({{"agents", label_array(violation.agents, gamma)}, {"detail", violation.detail}});
  }
  j["violations"] = std::move(v);
  return j;
}

std::string join(const Json& array, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < array.size(); ++i) {
    if (i != 0) out += sep;
    out += array[i].is_string() ? array[i].get<std::string>() : array[i].dump();
  }
  return out;
}

// Output ------------------------------------------------------------------------------

void emit(std::ostream& out, const Json& report, const std::string& format,
          const std::function<void(std::ostream&)>& table, const std::function<void(std::ostream&)>& csv) {
  if (format == "json") {
    out << report.dump(2) << '\n';
  } else if (format == "csv") {
    if (!csv) throw InvalidSpec("csv output is available for weights and sweep rows only");
    csv(out);
  } else {
    table(out);
  }
}

std::string format_decimal(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

// Commands ----------------------------------------------------------------------------

int cmd_evaluate(const std::string& matrix_path, const MechanismFlags& flags, const OutputFlags& output,
                 std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const RepresentationMatrix gamma = read_matrix_file(matrix_path);
  const MechanismSpec spec = build_spec(flags, gamma);
  const ExpectedWeightVector result = expected_weights(gamma, spec);
  const Classification cls = classify_mechanism(spec, result);

  Json report;
  report["labels"] = gamma.labels();
  report["mechanism"] = mechanism_json(spec, gamma);
  report["method"] = result.is_exact() ? "exact" : "mc";
  if (result.is_exact()) {
    report["weights"] = exact_array(result.exact);
    report["weights_2dp"] = display_array(result.exact);
    report["l1"] = to_string(sum(result.exact));
  } else {
    report["weights"] = result.estimate->mean;
    report["stderr"] = result.estimate->standard_error;
    double l1 = 0.0;
    for (double w : result.estimate->mean) l1 += w;
    report["l1"] = l1;
    report["samples"] = result.estimate->samples;
  }
  report["abstainers"] = label_array(result.abstainers, gamma);
  report["classification"] = {to_string(cls.openness), to_string(cls.flexibility), to_string(cls.directness)};
  report["metadata"] = metadata("evaluate", report["method"], spec.monte_carlo
                                                                   ? std::optional(spec.monte_carlo->seed)
                                                                   : std::nullopt);
  report["metadata"]["elapsed_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  auto table = [&](std::ostream& o) {
    o << "mechanism: " << flags.mechanism << " (" << report["method"].get<std::string>() << ")\n";
    o << std::left << std::setw(10) << "agent" << std::setw(16) << "weight"
      << (result.is_exact() ? "2dp" : "stderr") << '\n';
    for (std::size_t i = 0; i < gamma.n(); ++i) {
      o << std::setw(10) << gamma.label(i);
      if (result.is_exact()) {
        o << std::setw(16) << to_string(result.exact[i]) << truncate_2dp(result.exact[i]) << '\n';
      } else {
        o << std::setw(16) << format_decimal(result.estimate->mean[i])
          << format_decimal(result.estimate->standard_error[i]) << '\n';
      }
    }
    const auto& l1 = report["l1"];
    o << "l1: " << (l1.is_string() ? l1.get<std::string>() : format_decimal(l1.get<double>())) << '\n';
    o << "abstainers: " << (result.abstainers.empty() ? "none" : join(report["abstainers"])) << '\n';
    o << "classification: " << join(report["classification"]) << '\n';
  };
  auto csv = [&](std::ostream& o) {
    o << (result.is_exact() ? "agent,weight,weight_2dp\n" : "agent,estimate,stderr\n");
    for (std::size_t i = 0; i < gamma.n(); ++i) {
      o << gamma.label(i) << ',';
      if (result.is_exact()) {
        o << to_string(result.exact[i]) << ',' << truncate_2dp(result.exact[i]) << '\n';
      } else {
        o << format_decimal(result.estimate->mean[i]) << ',' << format_decimal(result.estimate->standard_error[i])
          << '\n';
      }
    }
  };
  emit(out, report, output.format, table, csv);
  return exit_code::kOk;
}

int cmd_axioms(const std::string& matrix_path, const MechanismFlags& flags, const std::string& checks_text,
               const std::string& basis_text, const OutputFlags& output, std::ostream& out) {
  const RepresentationMatrix gamma = read_matrix_file(matrix_path);
  const MechanismSpec spec = build_spec(flags, gamma);
  if (spec.monte_carlo) throw InvalidSpec("axioms are evaluated exactly; drop --method mc");

  const auto checks = split_list(checks_text);
  for (const auto& c : checks) {
    if (c != "eps" && c != "div" && c != "faith" && c != "gamma") {
      throw InvalidSpec("--checks: unknown check \"" + c + "\" (expected eps,div,faith,gamma)");
    }
  }
  auto wanted = [&](const char* name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };

  Json report;
  report["labels"] = gamma.labels();
  report["mechanism"] = mechanism_json(spec, gamma);
  bool violated = false;
  std::vector<std::string> lines;

  if (wanted("eps")) {
    const auto p = proportionality_diff(gamma, spec);
    report["proportionality"] = {{"diff", to_string(p.diff)},
                                 {"diff_2dp", truncate_2dp(p.diff)},
                                 {"witness", gamma.label(p.witness)},
                                 {"per_agent", exact_array(p.per_agent_deviation)}};
    lines.push_back("epsilon-proportionality: diff = " + to_string(p.diff) + " (" + truncate_2dp(p.diff) +
                    "), witness " + gamma.label(p.witness));
  }
  auto boolean_axiom = [&](const AxiomReport& r, const char* key) {
    report[key] = verdict_json(r, gamma);
    violated = violated || r.verdict == Verdict::Violated;
    std::string line = r.axiom + ": " + to_string(r.verdict);
    for (const auto& v : r.violations) line += "\n  " + v.detail;
    lines.push_back(line);
  };
  if (wanted("div")) {
    boolean_axiom(check_diversity(gamma, spec, basis_text == "projected" ? ShareBasis::Projected : ShareBasis::Original),
                  "diversity");
  }
  if (wanted("faith")) boolean_axiom(check_faithfulness(gamma, spec), "faithfulness");
  if (wanted("gamma")) {
    const auto g = gamma_effectiveness(gamma, spec);
    Json dist = Json::object();
    for (const auto& [size, p] : g.distribution) dist[std::to_string(size)] = to_string(p);
    report["gamma"] = {{"expected", g.expected_gamma ? Json(to_string(*g.expected_gamma)) : Json(nullptr)},
                       {"expected_2dp", g.expected_gamma ? Json(truncate_2dp(*g.expected_gamma)) : Json(nullptr)},
                       {"distribution", dist},
                       {"undefined_mass", to_string(g.undefined_mass)},
                       {"gamma_of_expectation",
                        g.gamma_of_expectation ? Json(*g.gamma_of_expectation) : Json(nullptr)}};
    lines.push_back("gamma-effectiveness: expected = " +
                    (g.expected_gamma ? to_string(*g.expected_gamma) : std::string("undefined")) +
                    ", undefined mass = " + to_string(g.undefined_mass));
  }
  report["metadata"] = metadata("axioms", "exact", std::nullopt);

  auto table = [&](std::ostream& o) {
    o << "mechanism: " << flags.mechanism << '\n';
    for (const auto& l : lines) o << l << '\n';
  };
  emit(out, report, output.format, table, nullptr);
  return violated ? exit_code::kViolated : exit_code::kOk;
}

int cmd_sweep(const std::string& matrix_path, const MechanismFlags& flags, const std::string& size_text,
              bool no_filter, const OutputFlags& output, std::ostream& out) {
  const RepresentationMatrix gamma = read_matrix_file(matrix_path);
  MechanismFlags f = flags;
  if (f.mechanism != "fptp" && f.mechanism != "proxy") throw InvalidSpec("--mechanism must be fptp or proxy for sweep");
  // The sweep supplies the candidate sets; a placeholder keeps validation happy.
  if (f.candidates.empty()) f.candidates = gamma.label(0);
  const MechanismSpec spec = build_spec(f, gamma);

  SweepDomain domain;
  domain.validity_filter = !no_filter;
  if (size_text.empty()) {
    domain.subset_size = gamma.n() > 1 ? gamma.n() - 1 : 1;
  } else if (size_text != "all") {
    try {
      domain.subset_size = std::stoul(size_text);
    } catch (const std::exception&) {
      throw InvalidSpec("--size must be an integer or \"all\"");
    }
  }
  const SweepResult r = sweep_epsilon_bounds(gamma, spec, domain);

  Json report;
  report["labels"] = gamma.labels();
  Json mech = mechanism_json(spec, gamma);
  mech.erase("candidates");
  report["mechanism"] = mech;
  report["domain"] = r.domain;
  report["evaluated"] = r.evaluated;
  report["skipped"] = r.skipped;
  report["min"] = {{"diff", to_string(r.min_diff)},
                   {"diff_2dp", truncate_2dp(r.min_diff)},
                   {"witness", label_array(r.min_witness.members(), gamma)}};
  report["max"] = {{"diff", to_string(r.max_diff)},
                   {"diff_2dp", truncate_2dp(r.max_diff)},
                   {"witness", label_array(r.max_witness.members(), gamma)}};
  report["interval_2dp"] = "[" + truncate_2dp(r.min_diff) + ", " + truncate_2dp(r.max_diff) + "]";
  report["metadata"] = metadata("sweep", "exact", std::nullopt);

  auto table = [&](std::ostream& o) {
    o << "mechanism: " << f.mechanism << ", domain: " << r.domain << " (" << r.evaluated << " evaluated, "
      << r.skipped << " skipped)\n";
    o << "min diff: " << to_string(r.min_diff) << " (" << truncate_2dp(r.min_diff) << ") at "
      << describe(r.min_witness, gamma) << '\n';
    o << "max diff: " << to_string(r.max_diff) << " (" << truncate_2dp(r.max_diff) << ") at "
      << describe(r.max_witness, gamma) << '\n';
    o << "epsilon interval: " << report["interval_2dp"].get<std::string>() << '\n';
  };
  auto csv = [&](std::ostream& o) {
    o << "bound,diff,diff_2dp,witness\n";
    o << "min," << to_string(r.min_diff) << ',' << truncate_2dp(r.min_diff) << ",\""
      << join(report["min"]["witness"], ",") << "\"\n";
    o << "max," << to_string(r.max_diff) << ',' << truncate_2dp(r.max_diff) << ",\""
      << join(report["max"]["witness"], ",") << "\"\n";
  };
  emit(out, report, output.format, table, csv);
  return exit_code::kOk;
}

struct GenerateFlags {
  std::string family;
  std::size_t n = 0;
  std::string blocks;
  std::string intra = "1";
  std::string trace_mass = "1";
  std::string concentration = "1";
  std::optional<std::size_t> support;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateFlags& g, std::ostream& out) {
  FamilySpec spec;
  spec.n = g.n;
  spec.seed = g.seed;
  if (g.family == "identity") {
    spec.family = family::Identity{};
  } else if (g.family == "uniform") {
    spec.family = family::Uniform{};
  } else if (g.family == "example") {
    spec.family = family::RunningExample{};
    if (spec.n == 0) spec.n = 5;
  } else if (g.family == "block") {
    family::BlockPolarized b;
    for (const auto& s : split_list(g.blocks)) b.blocks.push_back(std::stoul(s));
    b.intra_mass = parse_rational(g.intra);
    spec.family = b;
  } else if (g.family == "power") {
    spec.family = family::PowerSeeking{parse_rational(g.trace_mass)};
  } else {
    family::RandomStochastic r;
    r.concentration = parse_rational(g.concentration);
    r.support = g.support;
    spec.family = r;
  }
  const RepresentationMatrix gamma = generate(spec);
  if (g.out.empty()) {
    out << matrix_to_json(gamma).dump(2) << '\n';
  } else {
    write_matrix_file(gamma, g.out);
    out << "wrote " << gamma.n() << "x" << gamma.n() << " matrix to " << g.out << '\n';
  }
  return exit_code::kOk;
}

int cmd_stats(const std::string& matrix_path, const OutputFlags& output, std::ostream& out) {
  const RepresentationMatrix gamma = read_matrix_file(matrix_path);
  const MatrixStats s = matrix_stats(gamma);
  Json report;
  report["n"] = gamma.n();
  report["trace"] = to_string(s.trace);
  report["rank"] = s.rank;
  Json comps = Json::array();
  for (const auto& c : s.components) comps.push_back(label_array(c, gamma));
  report["components"] = comps;
  report["expected_vote_share"] = exact_array(expected_vote_share(gamma));
  report["metadata"] = metadata("stats", "exact", std::nullopt);
  auto table = [&](std::ostream& o) {
    o << "n: " << gamma.n() << "\ntrace: " << to_string(s.trace) << "\nrank: " << s.rank << "\ncomponents:";
    for (const auto& c : comps) o << " {" << join(c, ",") << "}";
    o << "\nexpected vote share: " << join(report["expected_vote_share"]) << '\n';
  };
  emit(out, report, output.format, table, nullptr);
  return exit_code::kOk;
}

int cmd_check_monotonicity(const std::string& a, const std::string& b, const std::string& agent,
                           const MechanismFlags& flags, const OutputFlags& output, std::ostream& out) {
  const RepresentationMatrix before = read_matrix_file(a);
  const RepresentationMatrix after = read_matrix_file(b);
  if (before.n() != after.n()) throw DimensionMismatch(before.n(), after.n());
  const MechanismSpec spec = build_spec(flags, before);
  const AgentIndex j = before.index_of(agent);
  const AxiomReport r = check_monotonicity_pair(before, after, j, spec);

  Json report;
  report["mechanism"] = mechanism_json(spec, before);
  report["agent"] = agent;
  report["monotonicity"] = verdict_json(r, before);
  report["metadata"] = metadata("check-monotonicity", "exact", std::nullopt);
  auto table = [&](std::ostream& o) {
    o << "monotonicity for agent " << agent << ": " << to_string(r.verdict) << '\n';
    if (r.verdict == Verdict::Undefined) o << "premise does not hold for this pair\n";
    for (const auto& v : r.violations) o << "  " << v.detail << '\n';
  };
  emit(out, report, output.format, table, nullptr);
  return r.verdict == Verdict::Violated ? exit_code::kViolated : exit_code::kOk;
}

int cmd_search_mono(const MonotonicitySearch& search, const OutputFlags& output, std::ostream& out) {
  const auto found = search_monotonicity_counterexample(search);
  Json report;
  report["mechanism"] = to_string(search.kind);
  report["n"] = search.n;
  report["trials"] = search.trials;
  if (found) {
    report["counterexample"] = {{"trial", found->trial},
                                {"agent", found->before.label(found->agent)},
                                {"candidates", label_array(found->candidates.members(), found->before)},
                                {"weight_before", to_string(found->weight_before)},
                                {"weight_after", to_string(found->weight_after)},
                                {"before", matrix_to_json(found->before)},
                                {"after", matrix_to_json(found->after)}};
  } else {
    report["counterexample"] = nullptr;
  }
  report["metadata"] = metadata("search-mono", "exact", search.seed);
  auto table = [&](std::ostream& o) {
    if (!found) {
      o << "no counterexample in " << search.trials << " trials\n";
      return;
    }
    o << "counterexample at trial " << found->trial << ": agent " << found->before.label(found->agent)
      << ", candidates " << describe(found->candidates, found->before) << ", weight "
      << to_string(found->weight_before) << " -> " << to_string(found->weight_after) << '\n';
    o << "before: " << matrix_to_json(found->before)["rows"].dump() << '\n';
    o << "after:  " << matrix_to_json(found->after)["rows"].dump() << '\n';
  };
  emit(out, report, output.format, table, nullptr);
  return found ? exit_code::kViolated : exit_code::kOk;
}

int cmd_reproduce(const OutputFlags& output, std::ostream& out) {
  const Reproduction r = reproduce_example();
  auto table = [&](std::ostream& o) {
    for (const auto& c : r.report["checks"]) {
      o << (c["pass"].get<bool>() ? "PASS  " : "FAIL  ") << c["name"].get<std::string>() << ": "
        << c["actual"].get<std::string>();
      if (!c["pass"].get<bool>()) o << " (expected " << c["expected"].get<std::string>() << ")";
      o << '\n';
    }
    o << "epsilon row: " << r.report["epsilon_row"].get<std::string>() << '\n';
    o << (r.passed ? "all values reproduced\n" : "MISMATCH\n");
  };
  emit(out, r.report, output.format, table, nullptr);
  return r.passed ? exit_code::kOk : exit_code::kReproductionMismatch;
}

std::string vector_text(std::span<const Rational> v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace

Reproduction reproduce_example() {
  const RepresentationMatrix gamma = running_example();
  const std::size_t n = gamma.n();
  auto r = [](long p, long q) {
    Rational value(p, q);
    value.canonicalize();
    return value;
  };
  const CandidateSet abce = CandidateSet::from({0, 1, 2, 4}, n);

  Reproduction out;
  Json checks = Json::array();
  auto check = [&](const std::string& name, const std::string& expected, const std::string& actual) {
    const bool pass = expected == actual;
    out.passed = out.passed && pass;
    checks.push_back({{"name", name}, {"expected", expected}, {"actual", actual}, {"pass", pass}});
  };

  const RationalVector shares = expected_vote_share(gamma);
  check("expected vote share E[V]", vector_text(RationalVector{r(5, 3), r(2, 3), r(16, 15), r(1, 5), r(7, 5)}),
        vector_text(shares));

  const ProjectedMatrix projected = project_matrix(gamma, abce);
  check("projected row D on {A,B,C,E}", vector_text(RationalVector{0, 0, r(1, 2), 0, r(1, 2)}),
        vector_text(projected.entries.row(3)));

  check("direct democracy", vector_text(RationalVector(n, Rational(1))), vector_text(direct_democracy(n).exact));
  check("fptp on {A,B,C,E}", vector_text(RationalVector{0, 0, r(1, 2), 0, r(1, 2)}),
        vector_text(fptp_expected_weights(gamma, abce).exact));
  check("proxy on {A,B,C,E}", vector_text(RationalVector{1, 1, r(3, 2), 0, r(3, 2)}),
        vector_text(proxy_expected_weights(gamma, abce).exact));
  check("liquid democracy",
        vector_text(RationalVector{r(89, 45), r(22, 45), r(14, 15), r(1, 5), r(7, 5)}),
        vector_text(liquid_expected_weights(gamma).exact));

  Rational all_self = 0;
  enumerate_profiles(ProfileSpace(gamma), [&](const VoteProfile& p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (p.choices[i] != static_cast<std::int32_t>(i)) return;
    }
    all_self = p.probability;
  });
  check("all-self liquid profile probability", "2/45", to_string(all_self));

  for (std::size_t k = 1; k <= n; ++k) {
    check("sortition k=" + std::to_string(k), vector_text(RationalVector(n, r(static_cast<long>(k), 5))),
          vector_text(sortition_expected_weights(n, k).exact));
  }

  auto eps = [&](MechanismSpec spec) { return proportionality_diff(gamma, spec).diff; };
  MechanismSpec direct;
  const Rational eps_d = eps(direct);
  MechanismSpec liquid;
  liquid.kind = MechanismKind::LiquidDemocracy;
  const Rational eps_l = eps(liquid);

  check("epsilon direct", "4/25 (0.16)", to_string(eps_d) + " (" + truncate_2dp(eps_d) + ")");
  check("epsilon liquid", "14/225 (0.06)", to_string(eps_l) + " (" + truncate_2dp(eps_l) + ")");
  bool sortition_constant = true;
  for (std::size_t k = 1; k <= n; ++k) {
    MechanismSpec s;
    s.kind = MechanismKind::Sortition;
    s.k = k;
    sortition_constant = sortition_constant && eps(s) == r(4, 25);
  }
  check("epsilon sortition, every k", "4/25 (0.16)", sortition_constant ? "4/25 (0.16)" : "varies with k");

  auto interval = [&](MechanismKind kind) {
    MechanismSpec s;
    s.kind = kind;
    if (kind == MechanismKind::FirstPastThePost) s.k = 1;
    s.candidates = abce;
    const SweepResult sweep = sweep_epsilon_bounds(gamma, s, SweepDomain{4, true});
    return std::pair{to_string(sweep.min_diff) + ", " + to_string(sweep.max_diff) + " [" +
                         truncate_2dp(sweep.min_diff) + ", " + truncate_2dp(sweep.max_diff) + "]",
                     "[" + truncate_2dp(sweep.min_diff) + ", " + truncate_2dp(sweep.max_diff) + "]"};
  };
  const auto [fptp_text, fptp_display] = interval(MechanismKind::FirstPastThePost);
  const auto [proxy_text, proxy_display] = interval(MechanismKind::ProxyVoting);
  check("epsilon fptp sweep over 4-subsets", "1/3, 13/15 [0.33, 0.86]", fptp_text);
  check("epsilon proxy sweep over 4-subsets", "2/15, 1/3 [0.13, 0.33]", proxy_text);

  out.report["instance"] = matrix_to_json(gamma);
  out.report["checks"] = std::move(checks);
  out.report["epsilon_row"] = "D:" + truncate_2dp(eps_d) + " F:" + fptp_display + " P:" + proxy_display +
                              " L:" + truncate_2dp(eps_l) + " S:" + (sortition_constant ? "0.16" : "?");
  out.report["passed"] = out.passed;
  out.report["metadata"] = metadata("reproduce-paper", "exact", std::nullopt);
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Expected voting weights and representation axioms for body-selection mechanisms", "repsel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  OutputFlags output;
  std::string matrix_path;

  MechanismFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "expected voting weights of one mechanism");
  evaluate->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  add_mechanism_flags(evaluate, eval_flags, true);
  add_format_flag(evaluate, output);

  MechanismFlags axiom_flags;
  std::string checks = "eps,div,faith,gamma";
  std::string basis = "original";
  auto* axioms = app.add_subcommand("axioms", "evaluate representation axioms");
  axioms->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  add_mechanism_flags(axioms, axiom_flags, true);
  axioms->add_option("--checks", checks, "comma-separated: eps,div,faith,gamma");
  axioms->add_option("--share-basis", basis, "vote shares read by diversity")
      ->check(CLI::IsMember({"original", "projected"}));
  add_format_flag(axioms, output);

  MechanismFlags sweep_flags;
  std::string size_text;
  bool no_filter = false;
  auto* sweep = app.add_subcommand("sweep", "best and worst proportionality over candidate sets");
  sweep->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  add_mechanism_flags(sweep, sweep_flags, false);
  sweep->add_option("--size", size_text, "candidate-set size, or \"all\" (default n-1)");
  sweep->add_flag("--no-validity-filter", no_filter, "fail on candidate sets with zero total weight");
  add_format_flag(sweep, output);

  GenerateFlags gen;
  auto* generate_cmd = app.add_subcommand("generate", "write a representation matrix from a family");
  generate_cmd->add_option("--family", gen.family, "identity|uniform|example|block|power|random")
      ->required()
      ->check(CLI::IsMember({"identity", "uniform", "example", "block", "power", "random"}));
  generate_cmd->add_option("--n", gen.n, "number of agents");
  generate_cmd->add_option("--blocks", gen.blocks, "block sizes, e.g. 2,3");
  generate_cmd->add_option("--intra", gen.intra, "within-block mass");
  generate_cmd->add_option("--trace-mass", gen.trace_mass, "diagonal mass");
  generate_cmd->add_option("--concentration", gen.concentration, "simplex concentration");
  generate_cmd->add_option("--support", gen.support, "nonzero entries per random row");
  generate_cmd->add_option("--seed", gen.seed, "random seed");
  generate_cmd->add_option("--out", gen.out, "output file (stdout if omitted)");

  auto* stats = app.add_subcommand("stats", "trace, rank and block structure of a matrix");
  stats->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  add_format_flag(stats, output);

  MechanismFlags mono_flags;
  std::string matrix2;
  std::string agent;
  auto* mono = app.add_subcommand("check-monotonicity", "monotonicity for one pair of matrices");
  mono->add_option("--matrix", matrix_path, "matrix before the change")->required();
  mono->add_option("--matrix2", matrix2, "matrix after the change")->required();
  mono->add_option("--agent", agent, "agent label")->required();
  add_mechanism_flags(mono, mono_flags, false);
  add_format_flag(mono, output);

  MonotonicitySearch search;
  std::string search_mechanism;
  std::string search_tie = "lex";
  std::string search_fallback = "abstain";
  auto* search_cmd = app.add_subcommand("search-mono", "random search for monotonicity counterexamples");
  search_cmd->add_option("--mechanism", search_mechanism, "direct|fptp|proxy|liquid|sortition")
      ->required()
      ->check(CLI::IsMember({"direct", "fptp", "proxy", "liquid", "sortition"}));
  search_cmd->add_option("--n", search.n, "number of agents")->required();
  search_cmd->add_option("--trials", search.trials, "number of random trials")->required();
  search_cmd->add_option("--seed", search.seed, "random seed")->required();
  search_cmd->add_option("--candidate-size", search.candidate_size, "candidate-set size (default n-1)");
  search_cmd->add_option("--support", search.support, "nonzero entries per random row");
  search_cmd->add_option("--k", search.k, "body size (sortition)");
  search_cmd->add_option("--tie", search_tie, "FPTP tie rule")->check(CLI::IsMember({"lex", "split"}));
  search_cmd->add_option("--fallback", search_fallback, "zero-mass rows")
      ->check(CLI::IsMember({"abstain", "uniform"}));
  search_cmd->add_option("--workers", search.workers, "worker threads (0 = all cores)");
  add_format_flag(search_cmd, output);

  auto* reproduce = app.add_subcommand("reproduce-paper", "recompute every value of the worked example");
  add_format_flag(reproduce, output);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kInputError;
  }

  try {
    if (evaluate->parsed()) return cmd_evaluate(matrix_path, eval_flags, output, out);
    if (axioms->parsed()) return cmd_axioms(matrix_path, axiom_flags, checks, basis, output, out);
    if (sweep->parsed()) return cmd_sweep(matrix_path, sweep_flags, size_text, no_filter, output, out);
    if (generate_cmd->parsed()) return cmd_generate(gen, out);
    if (stats->parsed()) return cmd_stats(matrix_path, output, out);
    if (mono->parsed()) return cmd_check_monotonicity(matrix_path, matrix2, agent, mono_flags, output, out);
    if (search_cmd->parsed()) {
      search.kind = parse_mechanism_kind(search_mechanism);
      search.tie_rule = search_tie == "split" ? TieRule::EqualSplit : TieRule::Lexicographic;
      search.fallback = search_fallback == "uniform" ? Fallback::Uniform : Fallback::Abstain;
      return cmd_search_mono(search, output, out);
    }
    if (reproduce->parsed()) return cmd_reproduce(output, out);
  } catch (const StateSpaceTooLarge& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kInputError;
  }
  return exit_code::kInputError;
}

}  // namespace repsel
