#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "euclidlab/closure.hpp"
#include "euclidlab/digest.hpp"
#include "euclidlab/diophantine.hpp"
#include "euclidlab/errors.hpp"
#include "euclidlab/json_io.hpp"
#include "euclidlab/parallel.hpp"
#include "euclidlab/witness.hpp"
#include "euclidlab/zsigmondy.hpp"

#ifndef EUCLIDLAB_VERSION
#define EUCLIDLAB_VERSION "0.0.0"
#endif

namespace euclidlab::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- list parsing ------------------------------------------------------------

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Natural> naturals(const std::string& text) {
  std::vector<Natural> out;
  for (const auto& t : split(text, ',')) out.push_back(parse_natural(t));
  return out;
}

std::uint32_t small(const Natural& v, const char* what) {
  if (!fits_u64(v) || v > UINT32_MAX) throw DomainError(std::string(what) + " is too large: " + to_string(v));
  return static_cast<std::uint32_t>(v.get_ui());
}

std::vector<std::uint32_t> exponents_or_ones(const std::string& text, std::size_t n) {
  if (text.empty()) return std::vector<std::uint32_t>(n, 1);
  std::vector<std::uint32_t> out;
  for (const auto& v : naturals(text)) out.push_back(small(v, "exponent"));
  return out;
}

std::set<unsigned> sizes_of(const std::string& text) {
  std::set<unsigned> out;
  for (const auto& v : naturals(text)) out.insert(small(v, "subset size"));
  return out;
}

std::vector<Subset> subsets_of(const std::string& text) {
  std::vector<Subset> out;
  for (const auto& t : split(text, ';')) out.push_back(parse_subset(t));
  return out;
}

std::vector<std::uint64_t> u64s(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& v : naturals(text)) {
    if (!fits_u64(v)) throw DomainError("value too large: " + to_string(v));
    out.push_back(to_u64(v));
  }
  return out;
}

SubsetFamily family_of(unsigned n, const std::string& sizes, const std::string& subsets) {
  if (!subsets.empty()) return SubsetFamily::from_subsets(n, subsets_of(subsets));
  return build_family(n, sizes_of(sizes));
}

// --- config files ------------------------------------------------------------

std::size_t line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_of(text, pos);
}

std::string scalar_token(const json& v, const std::string& key, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ConfigError(where + ": key '" + key + "' must be a string, integer or array");
}

std::string value_token(const json& v, const std::string& key, const std::string& where) {
  if (!v.is_array()) return scalar_token(v, key, where);
  // A list of lists is a family of subsets.
  const bool nested = std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_array(); });
  std::string out;
  for (const auto& e : v) {
    if (!out.empty()) out += nested ? ";" : ",";
    out += nested ? value_token(e, key, where) : scalar_token(e, key, where);
  }
  return out;
}

// Splices "--key value" pairs from the --config file right after the
// subcommand token, so flags given on the command line (parsed later, with
// take-last semantics) override the file.
void inject_config(CLI::App& app, std::vector<std::string>& args) {
  std::size_t sub_pos = args.size();
  CLI::App* sub = nullptr;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if ((sub = app.get_subcommand_no_throw(args[i])) != nullptr) {
      sub_pos = i;
      break;
    }
  }
  if (sub == nullptr) return;
  std::string path;
  for (std::size_t i = sub_pos + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ":" + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  // A full report carries its configuration under "config".
  if (doc.is_object() && doc.contains("schema_version") && doc.contains("config")) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError(path + ": config must be a JSON object");

  std::vector<std::string> injected;
  for (const auto& [key, value] : doc.items()) {
    const std::string where = path + ":" + std::to_string(line_of_key(text, key));
    CLI::Option* opt = key == "help" || key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError(where + ": unknown key '" + key + "' for " + sub->get_name());
    if (value.is_null()) continue;
    injected.push_back("--" + key);
    injected.push_back(value_token(value, key, where));
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub_pos) + 1, injected.begin(), injected.end());
}

json typed(const std::string& raw) {
  if (!raw.empty() && raw.size() < 19 && raw.find_first_not_of("-0123456789") == std::string::npos &&
      raw.find('-', 1) == std::string::npos && raw != "-") {
    return std::stoll(raw);
  }
  return raw;
}

json echo_config(const CLI::App& sub) {
  json out = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help" || name == "config" || name == "output") continue;
    const std::string raw = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
    if (raw.empty()) continue;
    out[name] = typed(raw);
  }
  return out;
}

// --- subcommands -------------------------------------------------------------

struct Common {
  unsigned threads = 0;
  std::string output = "-";
  std::string config;
  int verbosity = 0;
};

struct Outcome {
  json result;
  int code = kOk;
};

struct Command {
  CLI::App* app = nullptr;
  std::function<Outcome()> run;
};

std::uint64_t default_budget(std::uint64_t builtin) {
  const char* env = std::getenv("EUCLIDLAB_BUDGET");
  if (env == nullptr || *env == '\0') return builtin;
  try {
    const Natural v = parse_natural(env);
    if (!fits_u64(v) || v == 0) throw DomainError("out of range");
    return to_u64(v);
  } catch (const Error&) {
    throw ConfigError(std::string("EUCLIDLAB_BUDGET must be a positive integer, got '") + env + "'");
  }
}

json hit_json(const PrimePowerInstance& inst, const WitnessReport& r) {
  return {{"instance", to_json_value(inst)}, {"report", to_json_value(r)}};
}

}  // namespace

int run_cli(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  CLI::App app{"euclidlab: experiments on Euclid-style prime generation"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::uint64_t scan_budget = 0, closure_budget = 0, pillai_budget = 0;
  try {
    scan_budget = default_budget(1'000'000);
    closure_budget = default_budget(1'000'000);
    pillai_budget = default_budget(10'000'000);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  Common common;
  std::map<std::string, Command> commands;
  auto add = [&](const std::string& name, const std::string& description) -> CLI::App* {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--threads", common.threads, "Worker threads (0 = one per processor)");
    sub->add_option("--output", common.output, "Report path, - for standard output");
    sub->add_option("--config", common.config, "JSON file with the same keys as the flags");
    sub->add_option("--verbosity", common.verbosity, "Log level on standard error");
    commands[name].app = sub;
    return sub;
  };

  // check-theorem1
  struct {
    std::string primes, exponents, extra;
  } t1;
  {
    auto* s = add("check-theorem1", "Witness search on D = P1 u P(n-2) u P(n-1) for both constant signs");
    s->add_option("--primes", t1.primes, "Increasing primes p1,...,pn")->required();
    s->add_option("--exponents", t1.exponents, "Exponents (default all 1)");
    s->add_option("--extra-subsets,--extra", t1.extra, "Extra subsets, e.g. 1,3;2,4");
    commands["check-theorem1"].run = [&] {
      const auto primes = naturals(t1.primes);
      const auto result = check_theorem1(primes, exponents_or_ones(t1.exponents, primes.size()), subsets_of(t1.extra),
                                         common.threads);
      json runs = json::array();
      for (const auto& r : result.runs) {
        json j = hit_json(r.instance, r.report);
        j["epsilon"] = to_int(r.sign);
        runs.push_back(std::move(j));
      }
      return Outcome{{{"holds", result.holds()}, {"runs", std::move(runs)}}, result.holds() ? kOk : kViolation};
    };
  }

  // witness
  struct {
    std::string primes, exponents, sizes = "1", subsets, epsilon = "+1";
  } wi;
  {
    auto* s = add("witness", "Search one instance for a witness prime");
    s->add_option("--primes", wi.primes, "Increasing primes")->required();
    s->add_option("--exponents", wi.exponents, "Exponents (default all 1)");
    s->add_option("--sizes", wi.sizes, "Family as subset sizes");
    s->add_option("--subsets", wi.subsets, "Family as explicit subsets, e.g. 1;2,3");
    s->add_option("--epsilon", wi.epsilon, "Constant sign");
    commands["witness"].run = [&] {
      const auto primes = naturals(wi.primes);
      const auto n = static_cast<unsigned>(primes.size());
      PrimePowerInstance inst(primes, exponents_or_ones(wi.exponents, n), family_of(n, wi.sizes, wi.subsets),
                              SignAssignment(parse_sign(wi.epsilon)));
      const auto report = witness_search(inst, common.threads);
      json j = hit_json(inst, report);
      j["verified"] = verify_witness_report(inst, report);
      return Outcome{std::move(j), kOk};
    };
  }

  // scan
  struct {
    unsigned n_min = 3, n_max = 3;
    std::uint64_t pool_bound = 100;
    std::string pool = "bounded";
    std::uint32_t exponent_bound = 1;
    std::string n, sizes = "1", signs = "+1";
  } sc;
  {
    auto* s = add("scan", "Relaxation scan for instances without a witness");
    s->add_option("--n", sc.n, "Range a..b or a single n; overrides --n-min/--n-max");
    s->add_option("--n-min", sc.n_min);
    s->add_option("--n-max", sc.n_max);
    s->add_option("--pool-bound", sc.pool_bound, "Primes are drawn from [2, pool-bound]");
    s->add_option("--pool", sc.pool, "bounded or smallest")->check(CLI::IsMember({"bounded", "smallest"}));
    s->add_option("--exponent-bound", sc.exponent_bound);
    s->add_option("--sizes", sc.sizes, "Subset sizes of the family");
    s->add_option("--signs,--sign", sc.signs, "Constant signs to try, e.g. +1,-1");
    s->add_option("--budget", scan_budget, "Maximum number of instances");
    commands["scan"].run = [&] {
      ScanConfig cfg;
      cfg.n_min = sc.n_min;
      cfg.n_max = sc.n_max;
      if (!sc.n.empty()) {
        const auto dots = sc.n.find("..");
        cfg.n_min = small(parse_natural(sc.n.substr(0, dots)), "n");
        cfg.n_max = dots == std::string::npos ? cfg.n_min : small(parse_natural(sc.n.substr(dots + 2)), "n");
      }
      cfg.pool_bound = sc.pool_bound;
      cfg.pool = sc.pool == "smallest" ? PoolMode::smallest : PoolMode::bounded;
      cfg.exponent_bound = sc.exponent_bound;
      cfg.sizes = sizes_of(sc.sizes);
      cfg.signs.clear();
      for (const auto& t : split(sc.signs, ',')) cfg.signs.push_back(parse_sign(t));
      cfg.budget = scan_budget;
      cfg.threads = common.threads;
      const auto result = scan_relaxation(cfg);
      json absent = json::array();
      for (const auto& h : result.absent) absent.push_back(hit_json(h.instance, h.report));
      json j{{"instances_checked", result.instances_checked}, {"absent_count", result.absent.size()},
             {"absent", std::move(absent)}};
      return Outcome{std::move(j), result.absent.empty() ? kOk : kViolation};
    };
  }

  // negative-example
  struct {
    std::string seed_primes = "2,3,5", seed_exponents, sizes, subsets, epsilon;
  } ne;
  {
    auto* s = add("negative-example", "Extend a seed by all primes up to q so that no witness exists");
    s->add_option("--seed-primes", ne.seed_primes);
    s->add_option("--seed-exponents", ne.seed_exponents, "Default all 1");
    s->add_option("--sizes", ne.sizes, "Seed family as sizes (default every proper size)");
    s->add_option("--subsets", ne.subsets, "Seed family as explicit subsets");
    s->add_option("--epsilon", ne.epsilon, "Constant sign on the family; omit to take q over both signs");
    commands["negative-example"].run = [&] {
      const auto primes = naturals(ne.seed_primes);
      const auto k = static_cast<unsigned>(primes.size());
      std::string sizes = ne.sizes;
      if (sizes.empty() && ne.subsets.empty()) {
        for (unsigned i = 1; i < k; ++i) sizes += (i > 1 ? "," : "") + std::to_string(i);
      }
      std::optional<SignAssignment> signs;
      if (!ne.epsilon.empty()) signs = SignAssignment(parse_sign(ne.epsilon));
      const auto ex = negative_example_extend(primes, exponents_or_ones(ne.seed_exponents, k),
                                              family_of(k, sizes, ne.subsets), signs);
      const auto report = witness_search(ex.instance, common.threads);
      json j = hit_json(ex.instance, report);
      j["greatest_prime"] = to_json_value(ex.greatest_prime);
      j["seed_positions"] = ex.seed_positions;
      return Outcome{std::move(j), report.found ? kViolation : kOk};
    };
  }

  // closure
  struct {
    std::string seed = "2,3,5", epsilon = "+1", element_bound, certify;
    std::uint64_t prime_bound = 100;
    unsigned cap = 4;
    std::uint32_t max_generations = 64;
  } cl;
  {
    auto* s = add("closure", "Grow a prime-power set under q | prod(B) - eps0");
    s->add_option("--seed", cl.seed, "Seed prime powers, e.g. 4,9,25");
    s->add_option("--epsilon", cl.epsilon);
    s->add_option("--prime-bound", cl.prime_bound, "Coverage target: all primes up to this bound");
    s->add_option("--cap", cl.cap, "Largest subset size expanded");
    s->add_option("--max-generations", cl.max_generations, "Step budget");
    s->add_option("--budget", closure_budget, "Subset budget per step");
    s->add_option("--element-bound", cl.element_bound, "Largest prime adjoined (default prime-bound)");
    s->add_option("--certify", cl.certify, "Primes whose derivation chain is printed");
    commands["closure"].run = [&] {
      std::vector<PrimePower> seed;
      for (const auto& v : naturals(cl.seed)) seed.push_back(as_prime_power(v));
      ClosureRunOptions opt;
      opt.cap = cl.cap;
      opt.max_generations = cl.max_generations;
      opt.subset_budget = closure_budget;
      opt.threads = common.threads;
      if (!cl.element_bound.empty()) opt.element_bound = u64s(cl.element_bound).at(0);
      const auto run = closure_run(std::move(seed), parse_sign(cl.epsilon), cl.prime_bound, opt);
      json j = to_json_value(run);
      j["provenance_verified"] = verify_provenance(run.state);
      if (!cl.certify.empty()) {
        json certs = json::object();
        for (const auto& p : naturals(cl.certify)) {
          json chain = json::array();
          for (const auto& step : provenance_chain(run.state, p)) chain.push_back(to_json_value(step, run.state));
          certs[to_string(p)] = std::move(chain);
        }
        j["certificates"] = std::move(certs);
      }
      const bool budget_hit = run.outcome == ClosureOutcome::subset_budget_exceeded ||
                              run.outcome == ClosureOutcome::step_budget_exhausted;
      return Outcome{std::move(j), budget_hit ? kBudgetExceeded : kOk};
    };
  }

  // zsigmondy
  struct {
    std::string a, b = "1", method = "definition";
    std::uint32_t n = 2;
  } zs;
  {
    auto* s = add("zsigmondy", "Primitive prime divisors of a^n - b^n");
    s->add_option("--a", zs.a)->required();
    s->add_option("--b", zs.b);
    s->add_option("--n", zs.n);
    s->add_option("--method", zs.method)->check(CLI::IsMember({"definition", "cyclotomic"}));
    commands["zsigmondy"].run = [&] {
      const ZsigmondyQuery q{parse_natural(zs.a), parse_natural(zs.b), zs.n};
      const auto method = zs.method == "cyclotomic" ? ZsigmondyMethod::cyclotomic : ZsigmondyMethod::definition;
      const auto divisors = primitive_prime_divisors(q, method);
      const bool exception = is_exception(q);
      const bool consistent = divisors.empty() == exception;
      json j{{"a", to_json_value(q.a)},   {"b", to_json_value(q.b)},          {"n", q.n},
             {"method", zs.method},       {"primitive_divisors", to_json_value(divisors)},
             {"exception", exception},    {"consistent", consistent}};
      return Outcome{std::move(j), consistent ? kOk : kViolation};
    };
  }

  // lemma8
  Lemma8Bounds l8;
  {
    auto* s = add("lemma8", "Catalog of q^x - 1 = p^y (q^z - 1) with p | q + 1");
    s->add_option("--q-bound", l8.q_bound);
    s->add_option("--x-bound", l8.x_bound);
    s->add_option("--y-bound", l8.y_bound);
    s->add_option("--z-bound", l8.z_bound);
    commands["lemma8"].run = [&] {
      const auto solutions = lemma8_catalog(l8, common.threads);
      json all = json::array(), violations = json::array();
      for (const auto& sol : solutions) {
        all.push_back(to_json_value(sol));
        if (!lemma8_classified(sol)) violations.push_back(to_json_value(sol));
      }
      const bool clean = violations.empty();
      return Outcome{{{"solutions", std::move(all)}, {"violations", std::move(violations)}, {"classified", clean}},
                     clean ? kOk : kViolation};
    };
  }

  // pillai
  struct {
    std::string b = "2", primes;
    PillaiConfig cfg;
  } pi;
  {
    auto* s = add("pillai", "Bounded catalog of A (a^x1 - a^x2) = B (b^y1 - b^y2)");
    s->add_option("--b", pi.b);
    s->add_option("--primes", pi.primes, "Allowed prime factors of A and B");
    s->add_option("--a-min", pi.cfg.a_min);
    s->add_option("--a-max", pi.cfg.a_max);
    s->add_option("--coef-max", pi.cfg.coef_max, "Bound on A and B");
    s->add_option("--exp-max", pi.cfg.exp_max, "Bound on every exponent");
    s->add_option("--budget", pillai_budget);
    commands["pillai"].run = [&] {
      PillaiConfig cfg = pi.cfg;
      cfg.b = parse_integer(pi.b);
      cfg.prime_set = u64s(pi.primes);
      cfg.budget = pillai_budget;
      cfg.threads = common.threads;
      const auto solutions = pillai_scan(cfg);
      json list = json::array();
      for (const auto& sol : solutions) list.push_back(to_json_value(sol));
      return Outcome{{{"b", to_json_value(cfg.b)}, {"count", solutions.size()}, {"solutions", std::move(list)}}, kOk};
    };
  }

  // example13
  struct {
    std::string q = "3,5";
    Example13Config cfg;
  } e13;
  {
    auto* s = add("example13", "Residue check for A = {p^(nk) : p not in Q}");
    s->add_option("--q", e13.q);
    s->add_option("--sample-size", e13.cfg.sample_size);
    s->add_option("--subsets", e13.cfg.subset_samples, "Number of sampled subsets");
    s->add_option("--seed", e13.cfg.seed, "Sampling seed");
    commands["example13"].run = [&] {
      Example13Config cfg = e13.cfg;
      cfg.qs = naturals(e13.q);
      const auto r = construct_example_13(cfg);
      return Outcome{to_json_value(r), r.holds() ? kOk : kViolation};
    };
  }

  // example14
  struct {
    std::string q = "5", epsilon = "+1", g_bound = "10000";
    std::size_t sample_size = 50;
  } e14;
  {
    auto* s = add("example14", "Powers of a common primitive root");
    s->add_option("--q", e14.q);
    s->add_option("--epsilon", e14.epsilon);
    s->add_option("--sample-size", e14.sample_size);
    s->add_option("--g-bound", e14.g_bound, "Search bound for the primitive root");
    commands["example14"].run = [&] {
      Example14Config cfg{naturals(e14.q), parse_sign(e14.epsilon), e14.sample_size, parse_natural(e14.g_bound)};
      const auto r = construct_example_14(cfg);
      return Outcome{to_json_value(r), r.holds() ? kOk : kViolation};
    };
  }

  std::vector<std::string> args = input;
  try {
    inject_config(app, args);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (common.verbosity > 0) err << "euclidlab: running " << name << " with " << resolve_threads(common.threads) << " thread(s)\n";

  json report{{"schema_version", "1"}, {"tool_version", EUCLIDLAB_VERSION}, {"command", name}, {"config", echo_config(*sub)}};
  int code = kOk;
  const auto start = std::chrono::steady_clock::now();
  try {
    Outcome o = commands.at(name).run();
    report["result"] = std::move(o.result);
    code = o.code;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    report["result"] = {{"budget_exceeded", {{"required", e.required()}, {"budget", e.budget()}, {"message", e.what()}}}};
    code = kBudgetExceeded;
  } catch (const TheoremViolation& e) {
    err << "theorem violation: " << e.what() << "\n";
    report["result"] = {{"violation", e.what()}};
    code = kViolation;
  } catch (const LemmaViolation& e) {
    err << "lemma violation: " << e.what() << "\n";
    report["result"] = {{"violation", e.what()}};
    code = kViolation;
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  const auto elapsed = std::chrono::steady_clock::now() - start;
  report["timing_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  report["determinism_digest"] = canonical_digest(report["result"]);

  const std::string text = report.dump(2) + "\n";
  if (common.output == "-") {
    out << text;
  } else {
    std::ofstream file(common.output);
    if (!file) {
      err << "config error: cannot write '" << common.output << "'\n";
      return kConfigError;
    }
    file << text;
  }
  if (common.verbosity > 0) err << "euclidlab: exit " << code << "\n";
  return code;
}

}  // namespace euclidlab::cli
