#include "excitran/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "excitran/error.hpp"

namespace excitran {

using nlohmann::json;

std::vector<double> logspace(double start, double stop, int n) {
  if (!(start > 0) || !(stop > 0)) throw ValidationError("logspace bounds must be positive");
  if (n < 1) throw ValidationError("logspace needs at least one point");
  if (n == 1) return {start};
  const double a = std::log10(start), b = std::log10(stop);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  out.front() = start;
  out.back() = stop;
  return out;
}

std::vector<double> linspace(double start, double stop, int n) {
  if (n < 1) throw ValidationError("linspace needs at least one point");
  if (n == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = start + (stop - start) * i / (n - 1);
  out.back() = stop;
  return out;
}

QuadratureOptions RunConfig::quadrature() const {
  QuadratureOptions q;
  q.horizon = tolerances.horizon;
  q.max_horizon = tolerances.max_horizon;
  q.trace_threshold = tolerances.trace_threshold;
  q.integrator.atol = tolerances.quadrature_atol;
  return q;
}

PropagateOptions RunConfig::propagation() const {
  PropagateOptions p;
  p.integrator.atol = tolerances.atol;
  return p;
}

namespace {

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Accessors that name the field path on failure.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::initializer_list<const char*> allowed) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ParseError("expected an object", 0, path_.empty() ? "/" : path_);
    for (const auto& [key, _] : obj_.items())
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
        throw ParseError("unknown key '" + key + "'", 0, path_ + "/" + key);
  }

  bool has(const char* key) const { return obj_.contains(key); }
  const json& at(const char* key) const {
    if (!has(key)) throw ParseError("missing required key '" + std::string(key) + "'", 0, field(key));
    return obj_.at(key);
  }
  std::string field(const char* key) const { return path_ + "/" + key; }

  double number(const char* key) const {
    const json& v = at(key);
    if (!v.is_number()) throw ParseError("expected a number", 0, field(key));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValidationError("expected a finite number", field(key));
    return x;
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) throw ParseError("expected an integer", 0, field(key));
    return v.get<std::int64_t>();
  }
  int small_int(const char* key) const {
    const auto v = integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
      throw ValidationError("integer out of range", field(key));
    return static_cast<int>(v);
  }
  int small_int(const char* key, int fallback) const { return has(key) ? small_int(key) : fallback; }

  std::string string(const char* key) const {
    const json& v = at(key);
    if (!v.is_string()) throw ParseError("expected a string", 0, field(key));
    return v.get<std::string>();
  }
  std::string string(const char* key, std::string fallback) const { return has(key) ? string(key) : fallback; }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_boolean()) throw ParseError("expected true or false", 0, field(key));
    return v.get<bool>();
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
};

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array of numbers", 0, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ParseError("expected a number", 0, path + "/" + std::to_string(i));
    out.push_back(v[i].get<double>());
    if (!std::isfinite(out.back())) throw ValidationError("expected a finite number", path + "/" + std::to_string(i));
  }
  return out;
}

std::vector<std::string> string_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array of strings", 0, path);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_string()) throw ParseError("expected a string", 0, path + "/" + std::to_string(i));
    out.push_back(v[i].get<std::string>());
  }
  return out;
}

std::vector<NamePair> pair_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("expected an array of [name, name] pairs", 0, path);
  std::vector<NamePair> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto names = string_list(v[i], path + "/" + std::to_string(i));
    if (names.size() != 2) throw ParseError("expected exactly two names", 0, path + "/" + std::to_string(i));
    out.emplace_back(names[0], names[1]);
  }
  return out;
}

// A grid is either an explicit list or {"linspace"|"logspace": {start, stop, num}}.
std::vector<double> grid(const json& v, const std::string& path, bool allow_log, bool allow_lin) {
  if (v.is_array()) return number_list(v, path);
  Reader r(v, path, {"linspace", "logspace"});
  const bool log = r.has("logspace");
  if (log == r.has("linspace")) throw ParseError("give exactly one of linspace or logspace", 0, path);
  if (log && !allow_log) throw ParseError("logspace not allowed here", 0, r.field("logspace"));
  if (!log && !allow_lin) throw ParseError("linspace not allowed here", 0, r.field("linspace"));
  const char* key = log ? "logspace" : "linspace";
  Reader g(r.at(key), r.field(key), {"start", "stop", "num"});
  const int num = g.small_int("num");
  if (num < 1) throw ValidationError("num must be >= 1", g.field("num"));
  try {
    return log ? logspace(g.number("start"), g.number("stop"), num) : linspace(g.number("start"), g.number("stop"), num);
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), g.path());
  }
}

SiteGraph parse_hamiltonian(const json& v, const std::filesystem::path& base_dir, std::string& source) {
  try {
    if (v.is_string()) {
      source = v.get<std::string>();
      std::filesystem::path p(source);
      if (p.is_relative()) p = base_dir / p;
      return load_site_graph(p);
    }
    if (v.is_object()) {
      source = "inline";
      return parse_site_graph(v.dump(), "hamiltonian");
    }
  } catch (const ParseError& e) {
    throw ParseError(e.what(), e.line(), "/hamiltonian" + e.field());
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), "/hamiltonian" + e.field());
  }
  throw ParseError("expected a file path or an inline Hamiltonian object", 0, "/hamiltonian");
}

OligomerSpec parse_oligomer(const json& v) {
  Reader r(v, "/oligomer", {"n_monomers", "topology", "links"});
  OligomerSpec spec;
  spec.n_monomers = r.small_int("n_monomers", 1);
  if (r.has("topology")) {
    try {
      spec.topology = parse_topology(r.string("topology"));
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), r.field("topology"));
    }
  }
  if (r.has("links")) {
    const json& links = r.at("links");
    if (!links.is_array()) throw ParseError("expected an array", 0, r.field("links"));
    for (std::size_t i = 0; i < links.size(); ++i) {
      Reader l(links[i], r.field("links") + "/" + std::to_string(i), {"donor", "acceptor", "strength_cm1"});
      spec.links.push_back({l.string("donor"), l.string("acceptor"), l.number("strength_cm1")});
    }
  }
  return spec;
}

TrapSpec parse_trap(const json* v) {
  // Absent keys fall back to the LHCII output sites at 1 ps^-1.
  TrapSpec trap = ScenarioConfig{}.trap;
  if (!v) return trap;
  Reader r(*v, "/trap", {"mode", "targets", "rate_ps"});
  if (r.has("mode")) {
    try {
      trap.mode = parse_trap_mode(r.string("mode"));
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), r.field("mode"));
    }
  }
  trap.rate = r.number("rate_ps", trap.rate);
  switch (trap.mode) {
    case TrapMode::none:
      if (r.has("targets") && !r.at("targets").empty())
        throw ValidationError("trap mode none takes no targets", r.field("targets"));
      trap = TrapSpec::none();
      trap.rate = 0.0;
      break;
    case TrapMode::site_based:
      if (r.has("targets")) trap.sites = string_list(r.at("targets"), r.field("targets"));
      break;
    case TrapMode::exciton_based: {
      if (!r.has("targets")) throw ParseError("exciton-based trap needs targets", 0, r.field("targets"));
      trap.sites.clear();
      const json& t = r.at("targets");
      if (!t.is_array()) throw ParseError("expected an array of eigenstate indices", 0, r.field("targets"));
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].is_number_integer())
          throw ParseError("expected an integer", 0, r.field("targets") + "/" + std::to_string(i));
        trap.excitons.push_back(t[i].get<int>());
      }
      break;
    }
  }
  return trap;
}

InitialState parse_initial(const json& v, const std::string& path) {
  Reader r(v, path, {"kind", "monomer", "label", "index"});
  InitialState s;
  try {
    s.kind = parse_initial_kind(r.string("kind", "highest_eigenstate"));
  } catch (const ValidationError& e) {
    throw ValidationError(e.what(), r.field("kind"));
  }
  auto forbid = [&](const char* key) {
    if (r.has(key))
      throw ParseError("'" + std::string(key) + "' does not apply to " + std::string(to_string(s.kind)), 0, r.field(key));
  };
  switch (s.kind) {
    case InitialKind::highest_eigenstate:
      forbid("monomer"), forbid("label"), forbid("index");
      break;
    case InitialKind::lowest_eigenstate_of_monomer:
      forbid("label"), forbid("index");
      s.monomer = r.small_int("monomer", 0);
      break;
    case InitialKind::site_localized:
      forbid("index");
      s.label = r.string("label");
      s.monomer = r.small_int("monomer", 0);
      break;
    case InitialKind::eigenstate:
      forbid("monomer"), forbid("label");
      s.index = r.small_int("index");
      break;
  }
  return s;
}

std::vector<Partition> parse_partitions(const json& v) {
  if (v.is_string()) {
    if (v.get<std::string>() != "lhcii") throw ValidationError("unknown partition preset (expected \"lhcii\")", "/partitions");
    return default_lhcii_partitions();
  }
  if (!v.is_object()) throw ParseError("expected an object of name -> site labels, or \"lhcii\"", 0, "/partitions");
  std::vector<Partition> out;
  for (const auto& [name, labels] : v.items()) out.push_back({name, string_list(labels, "/partitions/" + name)});
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir, std::string_view source) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    const auto line = line_of_offset(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + e.what(), line);
  }

  Reader top(doc, "",
             {"hamiltonian", "hamiltonian_source", "oligomer", "scenario", "trap", "gamma_phi_ps", "temperature_k",
              "gamma_recomb_ps", "bath", "sweep", "disorder", "sample_times", "partitions", "observables",
              "tolerances", "seed", "output_dir", "fit"});

  std::string hamiltonian_source;
  SiteGraph monomer = parse_hamiltonian(top.at("hamiltonian"), base_dir, hamiltonian_source);
  if (top.has("hamiltonian_source")) hamiltonian_source = top.string("hamiltonian_source");

  ScenarioConfig sc;
  if (top.has("oligomer")) sc.oligomer = parse_oligomer(top.at("oligomer"));
  sc.trap = parse_trap(top.has("trap") ? &top.at("trap") : nullptr);
  if (top.has("scenario")) {
    Reader s(top.at("scenario"), "/scenario", {"role", "initial_state", "active_sinks"});
    if (s.has("role")) sc.role = parse_role(s.string("role"));
    if (s.has("initial_state")) sc.initial = parse_initial(s.at("initial_state"), s.field("initial_state"));
    if (s.has("active_sinks")) {
      const json& a = s.at("active_sinks");
      if (!a.is_array()) throw ParseError("expected an array of monomer indices", 0, s.field("active_sinks"));
      std::vector<int> sinks;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number_integer())
          throw ParseError("expected an integer", 0, s.field("active_sinks") + "/" + std::to_string(i));
        sinks.push_back(a[i].get<int>());
      }
      sc.active_sinks = std::move(sinks);
    }
  }
  if (top.has("gamma_phi_ps")) sc.gamma_phi = top.number("gamma_phi_ps");
  if (top.has("temperature_k")) sc.temperature_k = top.number("temperature_k");
  if (!sc.gamma_phi && !sc.temperature_k) sc.gamma_phi = 12.0;  // ambient default
  sc.gamma_recomb = top.number("gamma_recomb_ps", sc.gamma_recomb);
  if (top.has("bath")) {
    Reader b(top.at("bath"), "/bath", {"spectral_density", "reorganization_energy_cm1", "cutoff_cm1"});
    if (b.string("spectral_density", "ohmic") != "ohmic")
      throw ValidationError("only the ohmic spectral density is supported", b.field("spectral_density"));
    sc.bath.reorganization_energy_cm1 = b.number("reorganization_energy_cm1", sc.bath.reorganization_energy_cm1);
    sc.bath.cutoff_cm1 = b.number("cutoff_cm1", sc.bath.cutoff_cm1);
  }
  if (sc.temperature_k) {
    // Echo the mapped rate; a stated gamma_phi must agree with it.
    const double mapped = dephasing_from_temperature(*sc.temperature_k, sc.bath);
    if (!sc.gamma_phi) sc.gamma_phi = mapped;
  }

  Tolerances tol;
  if (top.has("tolerances")) {
    Reader t(top.at("tolerances"), "/tolerances",
             {"atol", "quadrature_atol", "trace_threshold", "horizon_ps", "max_horizon_ps"});
    tol.atol = t.number("atol", tol.atol);
    tol.quadrature_atol = t.number("quadrature_atol", tol.quadrature_atol);
    tol.trace_threshold = t.number("trace_threshold", tol.trace_threshold);
    if (t.has("horizon_ps")) tol.horizon = t.number("horizon_ps");
    tol.max_horizon = t.number("max_horizon_ps", tol.max_horizon);
    for (const char* key : {"atol", "quadrature_atol", "trace_threshold"})
      if (!(t.number(key, 1.0) > 0)) throw ValidationError("must be positive", t.field(key));
    if (tol.horizon && !(*tol.horizon > 0)) throw ValidationError("must be positive", t.field("horizon_ps"));
    if (tol.max_horizon < 0) throw ValidationError("must be >= 0", t.field("max_horizon_ps"));
  }

  std::uint64_t seed = 0;
  if (top.has("seed")) {
    const json& v = top.at("seed");
    if (!v.is_number_unsigned()) throw ParseError("expected a non-negative integer", 0, "/seed");
    seed = v.get<std::uint64_t>();
  }

  DisorderSpec disorder;
  disorder.seed = seed;
  if (top.has("disorder")) {
    Reader d(top.at("disorder"), "/disorder", {"sigma_cm1", "n_realizations"});
    disorder.sigma_cm1 = d.number("sigma_cm1", disorder.sigma_cm1);
    disorder.n_realizations = d.small_int("n_realizations", disorder.n_realizations);
  }
  disorder.validate();

  std::vector<double> gammas = logspace(0.01, 100.0, 41);
  if (top.has("sweep")) {
    Reader s(top.at("sweep"), "/sweep", {"gammas_ps"});
    gammas = grid(s.at("gammas_ps"), s.field("gammas_ps"), true, true);
  }
  if (gammas.empty()) throw ValidationError("sweep grid is empty", "/sweep/gammas_ps");
  for (std::size_t i = 0; i < gammas.size(); ++i)
    if (!(gammas[i] >= 0)) throw ValidationError("dephasing rates must be >= 0", "/sweep/gammas_ps/" + std::to_string(i));

  std::vector<double> times = linspace(0.0, 10.0, 201);
  if (top.has("sample_times")) times = grid(top.at("sample_times"), "/sample_times", false, true);
  if (times.empty()) throw ValidationError("sample_times is empty", "/sample_times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0)) throw ValidationError("sample times must be >= 0", "/sample_times/" + std::to_string(i));
    if (i > 0 && times[i] < times[i - 1])
      throw ValidationError("sample times must be ascending", "/sample_times/" + std::to_string(i));
  }

  Scenario scenario(monomer, sc);  // validates labels, sinks and initial state

  std::vector<Partition> partitions;
  if (top.has("partitions")) {
    partitions = parse_partitions(top.at("partitions"));
  } else {
    // The LHCII subsystems apply whenever every one of their labels exists.
    partitions = default_lhcii_partitions();
    for (const auto& p : partitions) {
      try {
        (void)resolve_partition(scenario.graph(), p);
      } catch (const ValidationError&) {
        partitions.clear();
        break;
      }
    }
  }
  std::set<std::string> partition_names;
  for (const auto& p : partitions) {
    if (!partition_names.insert(p.name).second) throw ValidationError("duplicate partition name", "/partitions/" + p.name);
    (void)resolve_partition(scenario.graph(), p);
  }

  ObservableRequest obs;
  if (top.has("observables")) {
    Reader o(top.at("observables"), "/observables",
             {"mutual_information", "negativity", "concurrence", "fit_delocalization"});
    if (o.has("mutual_information")) obs.mutual_information = pair_list(o.at("mutual_information"), o.field("mutual_information"));
    if (o.has("negativity")) obs.negativity = pair_list(o.at("negativity"), o.field("negativity"));
    if (o.has("concurrence")) obs.concurrence = pair_list(o.at("concurrence"), o.field("concurrence"));
    obs.fit_delocalization = o.boolean("fit_delocalization", obs.fit_delocalization);
  }
  auto check_pairs = [&](const std::vector<NamePair>& pairs, const char* key) {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const std::string field = "/observables/" + std::string(key) + "/" + std::to_string(i);
      for (const auto* name : {&pairs[i].first, &pairs[i].second})
        if (!partition_names.count(*name)) throw ValidationError("unknown partition '" + *name + "'", field);
      if (pairs[i].first == pairs[i].second) throw ValidationError("a partition cannot be paired with itself", field);
    }
  };
  check_pairs(obs.mutual_information, "mutual_information");
  check_pairs(obs.negativity, "negativity");
  for (std::size_t i = 0; i < obs.concurrence.size(); ++i) {
    const std::string field = "/observables/concurrence/" + std::to_string(i);
    try {
      if (resolve_site(scenario.graph(), obs.concurrence[i].first) ==
          resolve_site(scenario.graph(), obs.concurrence[i].second))
        throw ValidationError("concurrence needs two distinct sites", field);
    } catch (const ValidationError& e) {
      throw ValidationError(e.what(), field);
    }
  }

  FitInput fit;
  if (top.has("fit")) {
    Reader f(top.at("fit"), "/fit", {"input", "column"});
    if (f.has("input")) {
      fit.path = f.string("input");
      if (fit.path.is_relative()) fit.path = base_dir / fit.path;
    }
    fit.column = f.string("column", fit.column);
  }

  std::filesystem::path out = top.string("output_dir", "out");

  return RunConfig{
      .hamiltonian_source = std::move(hamiltonian_source),
      .monomer = std::move(monomer),
      .scenario = std::move(sc),
      .gammas = std::move(gammas),
      .disorder = disorder,
      .sample_times = std::move(times),
      .partitions = std::move(partitions),
      .observables = std::move(obs),
      .tolerances = tol,
      .seed = seed,
      .output_dir = std::move(out),
      .fit = std::move(fit),
  };
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path(), path.string());
}

std::string resolved_config_json(const RunConfig& c) {
  const auto& sc = c.scenario;
  json doc;
  doc["hamiltonian"] = json::parse(site_graph_to_json(c.monomer));
  doc["hamiltonian_source"] = c.hamiltonian_source;

  json links = json::array();
  for (const auto& l : sc.oligomer.links)
    links.push_back({{"donor", l.donor}, {"acceptor", l.acceptor}, {"strength_cm1", l.strength_cm1}});
  doc["oligomer"] = {{"n_monomers", sc.oligomer.n_monomers},
                     {"topology", std::string(to_string(sc.oligomer.topology))},
                     {"links", links}};

  json initial = {{"kind", std::string(to_string(sc.initial.kind))}};
  switch (sc.initial.kind) {
    case InitialKind::highest_eigenstate: break;
    case InitialKind::lowest_eigenstate_of_monomer: initial["monomer"] = sc.initial.monomer; break;
    case InitialKind::site_localized:
      initial["label"] = sc.initial.label;
      initial["monomer"] = sc.initial.monomer;
      break;
    case InitialKind::eigenstate: initial["index"] = sc.initial.index; break;
  }
  json scenario = {{"role", std::string(to_string(sc.role))}, {"initial_state", initial}};
  if (sc.active_sinks) scenario["active_sinks"] = *sc.active_sinks;
  doc["scenario"] = scenario;

  json trap = {{"mode", std::string(to_string(sc.trap.mode))}, {"rate_ps", sc.trap.rate}};
  if (sc.trap.mode == TrapMode::site_based) trap["targets"] = sc.trap.sites;
  if (sc.trap.mode == TrapMode::exciton_based) trap["targets"] = sc.trap.excitons;
  if (sc.trap.mode == TrapMode::none) trap["targets"] = json::array();
  doc["trap"] = trap;

  doc["gamma_phi_ps"] = *sc.gamma_phi;
  if (sc.temperature_k) doc["temperature_k"] = *sc.temperature_k;
  doc["gamma_recomb_ps"] = sc.gamma_recomb;
  doc["bath"] = {{"spectral_density", "ohmic"},
                 {"reorganization_energy_cm1", sc.bath.reorganization_energy_cm1},
                 {"cutoff_cm1", sc.bath.cutoff_cm1}};
  doc["sweep"] = {{"gammas_ps", c.gammas}};
  doc["disorder"] = {{"sigma_cm1", c.disorder.sigma_cm1}, {"n_realizations", c.disorder.n_realizations}};
  doc["sample_times"] = c.sample_times;
  json parts = json::object();
  for (const auto& p : c.partitions) parts[p.name] = p.site_labels;
  doc["partitions"] = parts;
  auto pairs = [](const std::vector<NamePair>& v) {
    json a = json::array();
    for (const auto& [x, y] : v) a.push_back({x, y});
    return a;
  };
  doc["observables"] = {{"mutual_information", pairs(c.observables.mutual_information)},
                        {"negativity", pairs(c.observables.negativity)},
                        {"concurrence", pairs(c.observables.concurrence)},
                        {"fit_delocalization", c.observables.fit_delocalization}};
  json tol = {{"atol", c.tolerances.atol},
              {"quadrature_atol", c.tolerances.quadrature_atol},
              {"trace_threshold", c.tolerances.trace_threshold},
              {"max_horizon_ps", c.tolerances.max_horizon}};
  if (c.tolerances.horizon) tol["horizon_ps"] = *c.tolerances.horizon;
  doc["tolerances"] = tol;
  doc["seed"] = c.seed;
  doc["output_dir"] = c.output_dir.generic_string();
  json fit = {{"column", c.fit.column}};
  if (!c.fit.path.empty()) fit["input"] = std::filesystem::absolute(c.fit.path).lexically_normal().generic_string();
  doc["fit"] = fit;
  return doc.dump(2) + "\n";
}

}  // namespace excitran
