#include "plfan/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "plfan/errors.hpp"
#include "plfan/fans.hpp"
#include "plfan/lp.hpp"

namespace plfan::cli {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

Rat rat_from_json(const json& j) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw InvalidInput("expected an integer or a \"p/q\" string, got " + j.dump());
}

QVector vector_from_json(const json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array, got " + j.dump());
  QVector v;
  for (const auto& x : j) v.push_back(rat_from_json(x));
  return v;
}

std::int64_t int_from_json(const json& j, const char* what) {
  if (!j.is_number_integer()) throw InvalidInput(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::size_t count_from_json(const json& j, const char* what) {
  const auto v = int_from_json(j, what);
  if (v < 0) throw InvalidInput(std::string(what) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

json to_json(const Rat& x) { return to_string(x); }

json to_json(const QVector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json to_json(const Fan& f) {
  json cones = json::array();
  for (const auto& c : f.maximal_cones()) {
    json rays = json::array();
    for (const auto& r : c.rays()) rays.push_back(to_json(r));
    cones.push_back({{"rays", rays}, {"dim", c.dim()}, {"multiplicity", multiplicity(c).get_str()}});
  }
  json rays = json::array();
  for (const auto& r : f.rays()) rays.push_back(to_json(r));
  return {{"ambient_dim", f.ambient_dim()}, {"rays", rays}, {"maximal_cones", cones}};
}

std::string read_all(std::istream& is) {
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string read_source(const std::string& path, std::istream& in) {
  if (path == "-") return read_all(in);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + path);
  return read_all(f);
}

std::string cone_label(const Cone& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.rays().size(); ++i) s += (i ? "," : "") + to_string(c.rays()[i]);
  return s + "]";
}

std::string tuple_label(const std::vector<std::uint64_t>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

/// Shared state of one invocation: the report skeleton and where to write it.
struct Run {
  json report;
  std::string json_path;
  bool timings = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  int finish(int status, std::ostream& err) {
    report["exit_status"] = status;
    if (timings) {
      const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      report["timings_ms"] = ms.count();
    }
    if (!json_path.empty()) {
      std::ofstream f(json_path, std::ios::binary);
      if (!f) {
        err << "error: cannot write " << json_path << "\n";
        return kUsage;
      }
      f << report.dump(2) << "\n";
    }
    return status;
  }
};

// ---- phi ------------------------------------------------------------------

struct PhiArgs {
  std::string gens, alpha, v, input;
};

int cmd_phi(const PhiArgs& a, Run& run, std::istream& in, std::ostream& out) {
  std::vector<QVector> gens;
  QVector alpha, v;
  std::string source;
  if (!a.input.empty()) {
    source = read_source(a.input, in);
    const json j = json::parse(source);
    for (const auto& g : j.at("generators")) gens.push_back(vector_from_json(g));
    alpha = vector_from_json(j.at("alpha"));
    v = vector_from_json(j.at("v"));
  } else {
    if (a.gens.empty() || a.alpha.empty() || a.v.empty())
      throw InvalidInput("phi needs --gens, --alpha and --v (or --input)");
    source = a.gens + "|" + a.alpha + "|" + a.v;
    gens = parse_vector_list(a.gens);
    alpha = parse_vector(a.alpha);
    v = parse_vector(a.v);
  }
  run.report["input_digest"] = digest(source);
  run.report["config"] = {{"generators", json::array()}, {"alpha", to_json(alpha)}, {"v", to_json(v)}};
  for (const auto& g : gens) run.report["config"]["generators"].push_back(to_json(g));

  const PhiValue phi = phi_alpha(gens, alpha, v);
  const DualityCheck d = verify_duality(gens, alpha, v);
  out << "phi = " << to_string(phi.value) << ", witness = " << to_string(phi.witness)
      << ", dual max = " << to_string(d.dual_value) << " at " << to_string(d.maximizer) << "\n";
  out << "dual certificate y = " << to_string(phi.dual) << ": <v_i, y> <= alpha_i for all i, <v, y> = "
      << to_string(dot(v, phi.dual)) << "\n";
  out << "duality gap " << (d.gap_zero ? "zero" : "NONZERO") << "\n";
  run.report["outcome"] = {{"phi", to_json(phi.value)},
                           {"witness", to_json(phi.witness)},
                           {"dual_certificate", to_json(phi.dual)},
                           {"dual_max", to_json(d.dual_value)},
                           {"maximizer", to_json(d.maximizer)},
                           {"gap_zero", d.gap_zero}};
  return d.gap_zero ? kOk : kDomainFailure;
}

// ---- fan ------------------------------------------------------------------

struct FanArgs {
  std::string gens, input, normal_alpha;
  bool linearity = false, smooth = false, check = false;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
};

int cmd_fan(const FanArgs& a, Run& run, std::istream& in, std::ostream& out) {
  std::vector<QVector> gens;
  std::string source;
  if (!a.input.empty()) {
    source = read_source(a.input, in);
    const json j = json::parse(source);
    for (const auto& g : j.at("generators")) gens.push_back(vector_from_json(g));
  } else {
    if (a.gens.empty()) throw InvalidInput("fan needs --gens (or --input)");
    source = a.gens;
    gens = parse_vector_list(a.gens);
  }
  if (gens.empty()) throw InvalidInput("fan needs at least one generator");
  const std::size_t n = gens.front().size();
  run.report["input_digest"] = digest(source);
  json cfg = {{"generators", json::array()}, {"linearity", a.linearity}, {"smooth", a.smooth},
              {"check", a.check}, {"seed", a.seed}, {"samples", a.samples}};
  for (const auto& g : gens) cfg["generators"].push_back(to_json(g));

  Fan fan;
  if (a.linearity) {
    fan = linearity_fan(gens, n);
  } else if (!a.normal_alpha.empty()) {
    const QVector alpha = parse_vector(a.normal_alpha);
    cfg["normal_fan_alpha"] = to_json(alpha);
    if (alpha.size() != gens.size()) throw InvalidInput("--normal-fan-alpha needs one entry per generator");
    if (!is_nonnegative(alpha)) throw InvalidInput("--normal-fan-alpha must be nonnegative");
    fan = normal_fan(build_q(gens, alpha, n));
  } else {
    fan = Fan::from_cone(Cone::from_generators(gens, n));
  }
  if (a.smooth) fan = smooth_refine(fan);
  run.report["config"] = cfg;

  const auto rays = fan.rays();
  out << "fan in R^" << n << ": " << rays.size() << " rays, " << fan.maximal_cones().size() << " maximal cones\n";
  for (const auto& r : rays) out << "ray " << to_string(r) << "\n";
  for (const auto& c : fan.maximal_cones())
    out << "cone " << cone_label(c) << " dim " << c.dim() << " multiplicity " << multiplicity(c).get_str()
        << (is_smooth(c) ? " smooth" : "") << "\n";
  run.report["outcome"] = {{"fan", to_json(fan)}};

  int status = kOk;
  if (a.check) {
    std::mt19937_64 rng(a.seed);
    std::string failure;
    for (std::size_t s = 0; s < a.samples && failure.empty(); ++s) {
      QVector alpha(gens.size());
      for (auto& x : alpha) {
        x = Rat(static_cast<long>(1 + rng() % 9), static_cast<long>(1 + rng() % 4));
        x.canonicalize();
      }
      for (const auto& c : fan.maximal_cones()) {
        if (!is_linear_on(gens, alpha, c, 4, rng())) {
          failure = "alpha = " + to_string(alpha) + " on cone " + cone_label(c);
          break;
        }
      }
    }
    if (failure.empty()) {
      out << "check: PASS (" << a.samples << " alpha samples)\n";
    } else {
      out << "check: FAIL, phi is not linear for " << failure << "\n";
      status = kDomainFailure;
    }
    run.report["outcome"]["check"] = failure.empty() ? json("PASS") : json("FAIL: " + failure);
  }
  return status;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  std::string file;
  std::optional<std::size_t> p_bound, max_multiple;
  std::optional<std::uint64_t> d_cap, seed;
  bool no_smooth = false, no_refine = false;
};

json options_json(const VerifyOptions& o) {
  return {{"p_bound", o.p_bound},           {"d_cap", o.d_cap},   {"L", o.max_multiple},
          {"refine_smooth", o.refine_smooth}, {"single_cone", o.single_cone}, {"seed", o.seed},
          {"random_weights", o.random_weights}};
}

int cmd_verify(const VerifyArgs& a, Run& run, std::istream& in, std::ostream& out) {
  const std::string source = read_source(a.file, in);
  run.report["input_digest"] = digest(source);
  const SystemFile sf = parse_system(json::parse(source));
  VerifyOptions opt = sf.caps;
  if (a.p_bound) opt.p_bound = *a.p_bound;
  if (a.d_cap) opt.d_cap = *a.d_cap;
  if (a.max_multiple) opt.max_multiple = *a.max_multiple;
  if (a.seed) opt.seed = *a.seed;
  if (a.no_smooth) opt.refine_smooth = false;
  if (a.no_refine) {
    opt.refine_smooth = false;
    opt.single_cone = true;
  }
  run.report["config"] = options_json(opt);

  const VerificationReport rep = verify_proposition(sf.system, opt);
  out << "fan: " << rep.fan.rays().size() << " rays, " << rep.fan.maximal_cones().size() << " maximal cones ("
      << (opt.single_cone ? "single cone" : "linearity fan") << (opt.refine_smooth ? ", smooth refinement" : "")
      << ")\n";
  out << "d = " << rep.exponent.d << "\n";
  json per_ray = json::array();
  for (const auto& r : rep.exponent.per_ray) {
    out << "  ray " << to_string(r.ray) << ": d = " << r.d << ", a_{dle} = a_{de}^l for l <= " << opt.max_multiple
        << ": " << (r.ideal_level_to_L ? "yes" : "no") << "\n";
    per_ray.push_back({{"ray", to_json(r.ray)}, {"d", r.d}, {"ideal_level_to_L", r.ideal_level_to_L}});
  }
  json cones = json::array();
  for (const auto& c : rep.cones) {
    std::size_t failed = 0;
    json tuples = json::array();
    for (const auto& t : c.tuples) {
      json jt = {{"p", t.p}, {"passed", t.passed}};
      if (!t.passed) {
        ++failed;
        jt["failed_link"] = t.failed_link;
        if (t.witness_weight) jt["witness_weight"] = to_json(*t.witness_weight);
      }
      tuples.push_back(std::move(jt));
    }
    std::string label = "[";
    json rays = json::array();
    for (std::size_t i = 0; i < c.rays.size(); ++i) {
      label += (i ? "," : "") + to_string(c.rays[i]);
      rays.push_back(to_json(c.rays[i]));
    }
    label += "]";
    out << "cone " << label << ": " << c.tuples.size() << " tuples, " << (c.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& t : c.tuples) {
      if (t.passed) continue;
      out << "  FAIL p = " << tuple_label(t.p) << ": " << t.failed_link;
      if (t.witness_weight) out << " at weight " << to_string(*t.witness_weight);
      out << "\n";
    }
    cones.push_back({{"rays", rays}, {"passed", c.passed}, {"failed_tuples", failed}, {"tuples", tuples}});
  }
  out << "weights tested: " << rep.weights_tested << "\n";
  out << "verdict: " << (rep.verified ? "VERIFIED" : "FALSIFIED") << "\n";
  run.report["outcome"] = {
      {"fan", to_json(rep.fan)},
      {"d", rep.exponent.d},
      {"per_ray", per_ray},
      {"cones", cones},
      {"weights_tested", rep.weights_tested},
      {"verdict", rep.verified ? "VERIFIED" : "FALSIFIED"},
      {"note", "closure-level identity checked exactly on every listed tuple; ideal-level stabilization "
               "a_{dle} = a_{de}^l checked only for l <= L"}};
  return rep.verified ? kOk : kDomainFailure;
}

}  // namespace

// ---- public helpers -------------------------------------------------------

QVector parse_vector(const std::string& text) {
  QVector v;
  for (const auto& part : split(text, ',')) v.push_back(parse_rat(part));
  if (v.empty()) throw InvalidInput("empty vector");
  return v;
}

std::vector<QVector> parse_vector_list(const std::string& text) {
  std::vector<QVector> out;
  for (const auto& part : split(text, ';')) {
    if (part.empty()) continue;
    out.push_back(parse_vector(part));
  }
  for (const auto& v : out)
    if (v.size() != out.front().size()) throw InvalidInput("vectors have different lengths");
  return out;
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SystemFile parse_system(const json& j) {
  if (!j.is_object()) throw InvalidInput("system file must be a JSON object");
  const std::size_t n = count_from_json(j.at("ambient_dim"), "ambient_dim");
  const std::size_t s = count_from_json(j.at("grading_rank"), "grading_rank");
  if (n == 0 || s == 0) throw InvalidInput("ambient_dim and grading_rank must be positive");
  std::vector<QVector> degrees;
  std::vector<MonomialIdeal> ideals;
  const json& gens = j.at("generators");
  if (!gens.is_array()) throw InvalidInput("generators must be an array");
  for (const auto& g : gens) {
    QVector degree;
    for (const auto& x : g.at("degree")) degree.push_back(Rat(static_cast<long>(int_from_json(x, "degree entry"))));
    std::vector<Exponent> exps;
    for (const auto& u : g.at("ideal")) {
      if (!u.is_array()) throw InvalidInput("ideal generators must be exponent arrays");
      Exponent e;
      for (const auto& x : u) e.push_back(int_from_json(x, "exponent"));
      exps.push_back(std::move(e));
    }
    degrees.push_back(std::move(degree));
    ideals.emplace_back(n, std::move(exps));
  }
  VerifyOptions caps;
  if (j.contains("caps")) {
    const json& c = j.at("caps");
    if (c.contains("d_cap")) caps.d_cap = count_from_json(c.at("d_cap"), "d_cap");
    if (c.contains("p_bound")) caps.p_bound = count_from_json(c.at("p_bound"), "p_bound");
    if (c.contains("L")) caps.max_multiple = count_from_json(c.at("L"), "L");
    if (c.contains("seed")) caps.seed = count_from_json(c.at("seed"), "seed");
  }
  return SystemFile{GradedSystem(s, n, std::move(degrees), std::move(ideals)), caps};
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact piecewise-linear fans and graded-system verification", "plfan"};
  app.require_subcommand(1);
  std::string json_path;
  bool timings = false;

  PhiArgs phi;
  auto* sub_phi = app.add_subcommand("phi", "minimum-cost representation value with duality certificate");
  sub_phi->add_option("--gens", phi.gens, "generators, e.g. \"1,0;0,1;1,1\"");
  sub_phi->add_option("--alpha", phi.alpha, "nonnegative costs, one per generator");
  sub_phi->add_option("--v", phi.v, "target vector");
  sub_phi->add_option("--input", phi.input, "JSON file {generators, alpha, v} or - for stdin");

  FanArgs fan;
  auto* sub_fan = app.add_subcommand("fan", "cone, linearity fan or normal fan, optionally smooth");
  sub_fan->add_option("--gens", fan.gens, "generators, e.g. \"1,0;0,1;1,1\"");
  sub_fan->add_option("--input", fan.input, "JSON file {generators} or - for stdin");
  auto* lin = sub_fan->add_flag("--linearity", fan.linearity, "linearity fan of the generators");
  auto* nf = sub_fan->add_option("--normal-fan-alpha", fan.normal_alpha, "normal fan of Q(alpha)");
  lin->excludes(nf);
  sub_fan->add_flag("--smooth", fan.smooth, "smooth refinement");
  sub_fan->add_flag("--check", fan.check, "test linearity of phi on every maximal cone");
  sub_fan->add_option("--samples", fan.samples, "alpha samples for --check");
  sub_fan->add_option("--seed", fan.seed, "seed for --check");

  VerifyArgs ver;
  auto* sub_verify = app.add_subcommand("verify", "closure identity on the cones of a fan for a graded system");
  sub_verify->add_option("file", ver.file, "system JSON file or - for stdin")->required();
  sub_verify->add_option("--p-bound", ver.p_bound, "largest sum of exponents tested per cone");
  sub_verify->add_option("--d-cap", ver.d_cap, "largest d tried per ray");
  sub_verify->add_option("--L", ver.max_multiple, "multiples l checked for ideal-level stabilization");
  sub_verify->add_option("--seed", ver.seed, "seed for the random weight battery");
  sub_verify->add_flag("--no-smooth", ver.no_smooth, "skip smooth refinement");
  sub_verify->add_flag("--no-refine", ver.no_refine, "debug: use the degree cone itself as the only cone");

  for (auto* sub : {sub_phi, sub_fan, sub_verify}) {
    sub->add_option("--json", json_path, "write the machine-readable report here");
    sub->add_flag("--timings", timings, "include wall-clock timings in the report");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  Run run;
  run.json_path = json_path;
  run.timings = timings;
  run.report["command"] = args;
  try {
    int status = kUsage;
    if (*sub_phi) status = cmd_phi(phi, run, in, out);
    if (*sub_fan) status = cmd_fan(fan, run, in, out);
    if (*sub_verify) status = cmd_verify(ver, run, in, out);
    return run.finish(status, err);
  } catch (const NotInCone& e) {
    err << "v not in cone: " << e.what() << "\n";
    run.report["error"] = e.what();
    return run.finish(kDomainFailure, err);
  } catch (const NotPointed& e) {
    err << "not pointed: " << e.what() << "\n";
    run.report["error"] = e.what();
    return run.finish(*sub_verify ? kUsage : kDomainFailure, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    run.report["error"] = e.what();
    return run.finish(kUsage, err);
  } catch (const json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    run.report["error"] = e.what();
    return run.finish(kUsage, err);
  }
}

}  // namespace plfan::cli
