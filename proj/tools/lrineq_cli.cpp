#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lrineq/lrineq.hpp"

using namespace lrineq;

namespace {

// Thrown for anything the user can fix on the command line (exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The requested construction does not solve the network (exit 1).
struct NoSolution : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int n = 2;
  std::uint64_t prime = 2;
  std::vector<std::uint64_t> primes{2, 3, 5, 7};
  std::size_t trials = 10000;
  std::uint64_t seed = 1;
  std::optional<std::size_t> ambient_dim;
  unsigned workers = 1;
  std::string ineq = "div";
  bool counterexample = false;
  bool bounded = false;
  bool projection = false;
  std::string network = "A";
  std::string network_file;
  int power = 1;
  std::string scheme = "none";
  bool permute_roles = false;
  bool compact_flow = false;
  std::string dump_model;
  std::string code = "from-matroid";
  std::string code_file;
  std::string code_out;
  std::string network_out;
  int k = 1;
  std::size_t cap_subset = kDefaultCircuitCap;
  std::uint64_t cap_simulation = kDefaultSimulationCap;
  std::size_t cap_lp = kDefaultSourceCap;
  bool json = false;
  std::string out;
};

Json config_json(const RunConfig& c) {
  Json j{{"command", c.command}};
  if (c.command == "verify") {
    j["ineq"] = c.ineq;
    j["n"] = c.n;
    j["prime"] = c.prime;
    j["trials"] = c.trials;
    j["ambient_dim"] = c.ambient_dim ? Json(*c.ambient_dim) : Json(nullptr);
    j["counterexample"] = c.counterexample;
    j["bounded"] = c.bounded;
    j["projection"] = c.projection;
  } else if (c.command == "circuits") {
    j["n"] = c.n;
    j["primes"] = c.primes;
    j["cap_subset"] = c.cap_subset;
  } else if (c.command == "network") {
    j["network"] = c.network_file.empty() ? Json(c.network) : Json(c.network_file);
    j["n"] = c.n;
    j["power"] = c.power;
  } else if (c.command == "bound") {
    j["network"] = c.network_file.empty() ? Json(c.network) : Json(c.network_file);
    j["n"] = c.n;
    j["scheme"] = c.scheme;
    j["permute_roles"] = c.permute_roles;
    j["compact_flow"] = c.compact_flow;
    j["cap_lp"] = c.cap_lp;
  } else if (c.command == "simulate") {
    j["network"] = c.network_file.empty() ? Json(c.network) : Json(c.network_file);
    j["n"] = c.n;
    j["prime"] = c.prime;
    j["code"] = c.code_file.empty() ? Json(c.code) : Json(c.code_file);
    j["power"] = c.power;
    j["trials"] = c.trials;
    j["cap_simulation"] = c.cap_simulation;
  } else if (c.command == "report") {
    j["n"] = c.n;
    j["k"] = c.k;
  }
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

IndexCodingNetwork base_network(const RunConfig& c) {
  if (!c.network_file.empty()) return network_from_json(read_json_file(c.network_file));
  if (c.network == "A") return network_A(c.n);
  if (c.network == "B") return network_B(c.n);
  throw ConfigError("--network must be A or B");
}

int shape_n(const IndexCodingNetwork& netw, const RunConfig& c) {
  if (c.network_file.empty()) return c.n;
  auto shape = detect_shape(netw);
  if (!shape) throw ConfigError("network file is not N_A or N_B; only --code-file can be simulated on it");
  return shape->second;
}

// Whether the printed inequality is expected to hold over GF(p).
bool holds_over(const std::string& ineq, int n, std::uint64_t p) {
  const bool divides = static_cast<std::uint64_t>(n) % p == 0;
  return (ineq == "div" || ineq == "tight_div") ? divides : !divides;
}

RankExpression inequality(const std::string& name, int n) {
  if (name == "div") return thm_div(n);
  if (name == "nondiv") return thm_nondiv(n);
  if (name == "tight_div") return tight_div(n);
  if (name == "tight_nondiv") return tight_nondiv(n);
  throw ConfigError("unknown inequality " + name);
}

struct Outcome {
  Json result;
  bool expected = true;
};

Outcome cmd_verify(const RunConfig& c) {
  Outcome o;
  if (c.projection) {
    auto r = projection_check(c.n, c.prime, c.trials, c.seed);
    o.result = to_json(r);
    o.expected = r.clean();
    return o;
  }
  if (c.bounded) {
    if (c.ineq != "div" && c.ineq != "nondiv") throw ConfigError("--bounded applies to div and nondiv only");
    auto r = bounded_dim_check(c.ineq == "div" ? TheoremKind::Div : TheoremKind::NonDiv, c.n, c.prime, c.trials,
                               c.seed, c.ambient_dim, c.workers);
    o.result = to_json(r);
    o.result["expect"] = "valid";
    o.expected = r.clean();
    return o;
  }
  auto e = inequality(c.ineq, c.n);
  const bool valid = holds_over(c.ineq, c.n, c.prime);
  VerifyOptions opts;
  opts.workers = c.workers;
  opts.inject_counterexample = c.counterexample || !valid;
  const auto d = c.ambient_dim.value_or(static_cast<std::size_t>(c.n + 1));
  auto r = verify(e, c.prime, d, c.trials, c.seed, opts);
  o.result = to_json(r);
  o.result["expect"] = valid ? "valid" : "violated";
  const bool injected_hit = !r.violations.empty() && r.violations.front().trial == -1;
  o.result["counterexample_violated"] = injected_hit;
  o.result["violations_reproduce"] = violations_reproduce(e, r);
  if (valid) {
    o.expected = r.clean();
  } else {
    if (r.injected == 0) throw ConfigError("ambient dimension too small for the L_n family");
    o.expected = injected_hit && violations_reproduce(e, r);
  }
  return o;
}

Outcome cmd_circuits(const RunConfig& c) {
  Outcome o;
  Json checks = Json::array();
  for (const auto& chk : verify_classes(c.n, c.primes, c.cap_subset)) {
    checks.push_back(to_json(chk));
    o.expected = o.expected && chk.expected_ok();
  }
  o.result = Json{{"n", c.n}, {"class_A", to_json(class_A(c.n))}, {"class_B", to_json(class_B(c.n))},
                  {"checks", checks}};
  return o;
}

Outcome cmd_network(const RunConfig& c) {
  auto netw = lex_power(base_network(c), c.power);
  Json stats{{"sources", netw.size()}, {"demands", netw.demands().size()}};
  if (c.power == 1 && netw.size() <= 16) stats["r_cl"] = r_cl(netw);
  if (!c.network_out.empty()) write_text(c.network_out, to_json(netw).dump(2) + "\n");
  return {Json{{"stats", stats}, {"network", to_json(netw)}}, true};
}

// Closed-form value the bound is compared against.
std::optional<Rational> reference_value(const IndexCodingNetwork& netw, SchemeKind scheme) {
  auto shape = detect_shape(netw);
  if (!shape) return std::nullopt;
  auto rep = capacity_report(shape->second, 1);
  if (scheme == SchemeKind::None) return 1 / rep.at("rate_bound");
  if (shape->first == NetworkShape::A && scheme == SchemeKind::NonDiv) return rep.at("case_i.lp_bound");
  if (shape->first == NetworkShape::B && scheme == SchemeKind::Div) return rep.at("case_ii.lp_bound");
  return std::nullopt;
}

Outcome cmd_bound(const RunConfig& c) {
  auto netw = base_network(c);
  BoundOptions opt;
  if (c.scheme == "none") opt.scheme = SchemeKind::None;
  else if (c.scheme == "div") opt.scheme = SchemeKind::Div;
  else if (c.scheme == "nondiv") opt.scheme = SchemeKind::NonDiv;
  else throw ConfigError("--scheme must be none, div or nondiv");
  opt.permute_roles = c.permute_roles;
  opt.compact_flow = c.compact_flow;
  opt.source_cap = c.cap_lp;

  BoundResult res;
  auto lp = bound_model(netw, opt, &res);
  if (!c.dump_model.empty()) write_text(c.dump_model, to_text(lp));
  res.solution = solve_min(lp);
  Outcome o;
  if (res.solution.status != LPStatus::Optimal) {
    o.result = Json{{"error", Json{{"kind", "solver"}, {"status", to_string(res.solution.status)}}}};
    o.expected = false;
    return o;
  }
  res.b = res.solution.optimum;
  if (sgn(res.b) != 0) res.B = 1 / res.b;
  o.result = to_json(res, lp);
  if (auto ref = reference_value(netw, opt.scheme)) {
    const bool ok = opt.scheme == SchemeKind::None ? res.b == *ref : res.b >= *ref;
    o.result["reference"] = Json{{"value", rational_json(*ref)}, {"relation", opt.scheme == SchemeKind::None ? "==" : ">="},
                                 {"met", ok}};
    o.expected = ok;
  }
  return o;
}

LinearIndexCode build_code(const RunConfig& c, const IndexCodingNetwork& netw) {
  if (!c.code_file.empty()) return code_from_json(read_json_file(c.code_file));
  const int n = shape_n(netw, c);
  auto m = VectorMatroid::from_ln(n, c.prime);
  if (c.code == "from-matroid") {
    try {
      return solution_from_representation(m, netw);
    } catch (const std::invalid_argument& e) {
      throw NoSolution(e.what());
    }
  }
  if (c.code == "extended") {
    // Solve the network this field handles, send C uncoded, then decode the requested demands.
    auto solvable = m.modulus().divides(static_cast<std::uint64_t>(n)) ? network_A(n) : network_B(n);
    auto base = solution_from_representation(m, solvable);
    return retarget(extend_with_message(base, solvable, "C"), netw);
  }
  throw ConfigError("--code must be from-matroid or extended");
}

Outcome cmd_simulate(const RunConfig& c) {
  auto base = base_network(c);
  std::optional<LinearIndexCode> built;
  try {
    built = build_code(c, base);
  } catch (const NoSolution& e) {
    return {Json{{"error", Json{{"kind", "no_solution"}, {"message", e.what()}}}}, false};
  }
  auto code = *built;
  auto netw = base;
  if (c.power > 1) {
    netw = lex_power(base, c.power);
    code = power_code(code, c.power);
  }
  if (!c.code_out.empty()) write_text(c.code_out, to_json(code).dump(2) + "\n");
  SimulationOptions opt;
  opt.exhaustive_cap = c.cap_simulation;
  opt.trials = c.trials;
  opt.seed = c.seed;
  opt.workers = c.workers;
  auto v = simulate(code, netw, opt);
  Json res{{"p", code.modulus().value()},
           {"k", code.block_length()},
           {"n_broadcast", code.broadcast_length()},
           {"sources", netw.size()},
           {"demands", netw.demands().size()},
           {"verdict", to_json(v, netw)}};
  return {res, v.passed()};
}

Outcome cmd_report(const RunConfig& c) { return {to_json(capacity_report(c.n, c.k)), true}; }

void render_scalars(std::ostream& os, const Json& j, const std::string& prefix, int depth) {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && depth < 2 && value.size() <= 12) {
      render_scalars(os, value, prefix + key + ".", depth + 1);
    } else if (value.is_array() || value.is_object()) {
      os << prefix << key << ": [" << value.size() << " items]\n";
    } else if (!value.is_object()) {
      os << prefix << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
    }
  }
}

std::string render(const Json& doc) {
  std::ostringstream os;
  os << doc["config"]["command"].get<std::string>() << " (lrineq " << doc["version"].get<std::string>()
     << ", seed " << doc["seed"] << ")\n";
  if (doc["result"].contains("entries")) {
    for (const auto& e : doc["result"]["entries"]) {
      os << "  " << e["key"].get<std::string>() << " = " << e["value"].get<std::string>() << "\n";
    }
  } else {
    std::ostringstream body;
    render_scalars(body, doc["result"], "", 0);
    std::istringstream lines(body.str());
    for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  }
  os << (doc["expected"].get<bool>() ? "OK" : "UNEXPECTED") << "\n";
  return os.str();
}

void emit(const RunConfig& c, const Json& doc) {
  const auto text = c.json ? doc.dump(2) + "\n" : render(doc);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, c.json ? text : doc.dump(2) + "\n");
    if (!c.json) std::cout << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Characteristic-dependent linear rank inequalities and index coding bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  auto common = [&](CLI::App* s) {
    s->add_option("--seed", c.seed, "random seed");
    s->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
    s->add_flag("--json", c.json, "print the JSON report");
    s->add_option("--out", c.out, "write the JSON report to a file");
  };
  auto positive = CLI::PositiveNumber;

  auto* verify_cmd = app.add_subcommand("verify", "check an inequality on random subspace families");
  verify_cmd->add_option("--ineq", c.ineq, "div, nondiv, tight_div or tight_nondiv")
      ->check(CLI::IsMember({"div", "nondiv", "tight_div", "tight_nondiv"}));
  verify_cmd->add_option("--n", c.n)->check(CLI::Range(2, 12));
  verify_cmd->add_option("--prime", c.prime)->check(positive);
  verify_cmd->add_option("--trials", c.trials);
  verify_cmd->add_option("--ambient-dim", c.ambient_dim)->check(positive);
  verify_cmd->add_flag("--counterexample", c.counterexample, "also evaluate the L_n family");
  verify_cmd->add_flag("--bounded", c.bounded, "ambient dimension at most n, any field");
  verify_cmd->add_flag("--projection", c.projection, "projection entropy dichotomy");
  common(verify_cmd);

  auto* circuits_cmd = app.add_subcommand("circuits", "enumerate circuits of M(L_n) and check the classes");
  circuits_cmd->add_option("--n", c.n)->check(CLI::Range(2, 12));
  circuits_cmd->add_option("--primes", c.primes)->delimiter(',');
  circuits_cmd->add_option("--cap-subset", c.cap_subset, "max ground set size")->check(positive);
  common(circuits_cmd);

  auto network_opts = [&](CLI::App* s) {
    s->add_option("--network", c.network, "A or B")->check(CLI::IsMember({"A", "B"}));
    s->add_option("--network-file", c.network_file, "network JSON")->check(CLI::ExistingFile);
    s->add_option("--n", c.n)->check(CLI::Range(2, 12));
  };

  auto* network_cmd = app.add_subcommand("network", "build N_A or N_B and its lexicographic powers");
  network_opts(network_cmd);
  network_cmd->add_option("--power", c.power)->check(CLI::Range(1, 4));
  network_cmd->add_option("--network-out", c.network_out, "write the network JSON");
  common(network_cmd);

  auto* bound_cmd = app.add_subcommand("bound", "exact LP bound min z_empty");
  network_opts(bound_cmd);
  bound_cmd->add_option("--scheme", c.scheme)->check(CLI::IsMember({"none", "div", "nondiv"}));
  bound_cmd->add_flag("--permute-roles", c.permute_roles);
  bound_cmd->add_flag("--compact-flow", c.compact_flow, "one flow row per demand instead of per subset");
  bound_cmd->add_option("--cap-lp", c.cap_lp, "max number of sources")->check(positive);
  bound_cmd->add_option("--dump-model", c.dump_model, "write the LP as text");
  common(bound_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "run a linear index code against every demand");
  network_opts(simulate_cmd);
  simulate_cmd->add_option("--prime", c.prime)->check(positive);
  simulate_cmd->add_option("--code", c.code)->check(CLI::IsMember({"from-matroid", "extended"}));
  simulate_cmd->add_option("--code-file", c.code_file, "code JSON")->check(CLI::ExistingFile);
  simulate_cmd->add_option("--code-out", c.code_out, "write the code JSON");
  simulate_cmd->add_option("--power", c.power)->check(CLI::Range(1, 4));
  simulate_cmd->add_option("--trials", c.trials, "sampled tuples above the cap");
  simulate_cmd->add_option("--cap-simulation", c.cap_simulation, "max tuples checked exhaustively")->check(positive);
  common(simulate_cmd);

  auto* report_cmd = app.add_subcommand("report", "closed-form capacity figures");
  report_cmd->add_option("--n", c.n)->check(CLI::Range(2, 1000));
  report_cmd->add_option("--k", c.k)->check(CLI::Range(1, 8));
  common(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  try {
    Outcome o;
    if (c.command == "verify") o = cmd_verify(c);
    else if (c.command == "circuits") o = cmd_circuits(c);
    else if (c.command == "network") o = cmd_network(c);
    else if (c.command == "bound") o = cmd_bound(c);
    else if (c.command == "simulate") o = cmd_simulate(c);
    else o = cmd_report(c);

    Json doc{{"tool", "lrineq"}, {"version", kVersion}, {"seed", c.seed}, {"config", config_json(c)},
             {"expected", o.expected}, {"result", o.result}};
    emit(c, doc);
    return o.expected ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
