#include "cglab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cglab/channel.hpp"

namespace cglab {

using nlohmann::json;

// ---- formatting ----

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_csv(std::ostream& os, const Metadata& meta, const Table& table) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) throw std::logic_error("emit_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

std::string emit_csv(const Metadata& meta, const Table& table) {
  std::ostringstream os;
  emit_csv(os, meta, table);
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ValidationError(key + ": '" + text + "' is not a finite number");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ValidationError(key + ": '" + text + "' is not a non-negative integer");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(key, part));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

std::pair<Metadata, Table> parse_csv(const std::string& text) {
  Metadata meta;
  Table table;
  bool header = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!header && line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ValidationError("parse_csv: metadata line without '='");
      meta.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    } else if (!header) {
      table.columns = split(line, ',');
      header = true;
    } else {
      std::vector<double> row;
      for (const auto& cell : split(line, ',')) row.push_back(parse_double("csv cell", cell));
      if (row.size() != table.columns.size()) throw ValidationError("parse_csv: row width differs from header");
      table.rows.push_back(std::move(row));
    }
  }
  if (!header) throw ValidationError("parse_csv: missing header row");
  return {meta, table};
}

std::string emit_json(const Metadata& meta, const json& result) {
  json m = json::object();
  for (const auto& [k, v] : meta) m[k] = v;
  json doc = json::object();
  doc["metadata"] = m;
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

json to_json(const FitResult& r) {
  return json{{"p_fit", r.p_fit},
              {"residual_sum", r.residual_sum},
              {"eps_used", r.eps_used},
              {"n_used", r.n_used},
              {"seed", {{"seed", r.seed.seed}, {"stream_id", r.seed.stream_id}}}};
}

json to_json(const Table& t) { return json{{"columns", t.columns}, {"rows", t.rows}}; }

// ---- configuration ----

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

Command parse_command(const std::string& s) {
  if (s == "sample") return Command::sample;
  if (s == "pdf") return Command::pdf;
  if (s == "volume") return Command::volume;
  if (s == "avg-state") return Command::avg_state;
  if (s == "fit") return Command::fit;
  if (s == "sweep-eps") return Command::sweep_eps;
  if (s == "covariance-check") return Command::covariance_check;
  throw ValidationError("unknown command '" + s + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::sample: return "sample";
    case Command::pdf: return "pdf";
    case Command::volume: return "volume";
    case Command::avg_state: return "avg-state";
    case Command::fit: return "fit";
    case Command::sweep_eps: return "sweep-eps";
    case Command::covariance_check: return "covariance-check";
  }
  return "?";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"N",     "p",      "h",      "eps",  "eps-grid", "n",
                                             "seed",  "streams", "ensemble", "output", "format", "grid",
                                             "p-test", "r-ts",  "v-eps",  "model", "placement"};
  return keys;
}

namespace {

std::vector<std::string> relevant_keys(Command c) {
  switch (c) {
    case Command::sample: return {"N", "p", "h", "n", "seed", "streams", "ensemble", "r-ts", "format", "output"};
    case Command::pdf: return {"N", "p", "h", "grid", "ensemble", "format", "output"};
    case Command::volume: return {"p", "h", "r-ts", "v-eps", "eps", "ensemble", "format", "output"};
    case Command::avg_state: return {"p", "h", "r-ts", "ensemble", "n", "seed", "streams", "format", "output"};
    case Command::fit: return {"p-test", "eps", "n", "seed", "streams", "model", "placement", "format", "output"};
    case Command::sweep_eps:
      return {"p-test", "eps-grid", "n", "seed", "streams", "model", "placement", "format", "output"};
    case Command::covariance_check: return {"N", "p", "h", "n", "seed", "streams", "format", "output"};
  }
  return {};
}

bool uses(Command c, const std::string& key) {
  const auto k = relevant_keys(c);
  return std::find(k.begin(), k.end(), key) != k.end();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ValidationError(msg);
}

}  // namespace

RunConfig config_from_pairs(Command command, const std::vector<std::pair<std::string, std::string>>& pairs,
                            const std::optional<std::string>& env_seed) {
  std::map<std::string, std::string> kv;
  const auto& known = config_keys();
  for (const auto& [k, v] : pairs) {
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ValidationError("unknown key '" + k + "'");
    kv[k] = v;
  }
  for (auto it = kv.begin(); it != kv.end();)  // keys of other commands are ignored
    it = uses(command, it->first) ? std::next(it) : kv.erase(it);

  RunConfig c;
  c.command = command;
  auto has = [&](const char* k) { return kv.count(k) > 0; };
  auto echo = [&](const std::string& k, const std::string& v) { c.echo[k] = v; };

  // seed: explicit key, then environment fallback, then 0
  if (has("seed")) c.seed.seed = parse_u64("seed", kv["seed"]);
  else if (env_seed && !env_seed->empty()) c.seed.seed = parse_u64("CG_LAB_SEED", *env_seed);
  if (has("streams")) c.seed.stream_id = parse_u64("streams", kv["streams"]);
  if (uses(command, "seed")) {
    echo("seed", std::to_string(c.seed.seed));
    echo("streams", std::to_string(c.seed.stream_id));
  }

  switch (command) {
    case Command::sample: c.n_samples = 1000; break;
    case Command::avg_state: c.n_samples = 0; break;
    case Command::covariance_check: c.n_samples = 100; break;
    default: break;
  }
  if (has("n")) c.n_samples = parse_u64("n", kv["n"]);
  if (uses(command, "n")) {
    require(command == Command::avg_state || c.n_samples >= 1, "n must be >= 1");
    require(c.n_samples <= 100'000'000ull, "n must be <= 1e8");
    if ((command == Command::fit || command == Command::sweep_eps)) require(c.n_samples >= 2, "n must be >= 2");
    if (command == Command::avg_state && c.n_samples > 0) require(c.n_samples >= 64, "n must be 0 or >= 64");
    echo("n", std::to_string(c.n_samples));
  }

  if (has("ensemble")) c.ensemble = parse_ensemble(kv["ensemble"]);
  if (uses(command, "ensemble")) echo("ensemble", to_string(c.ensemble));

  // weights: exactly one of p / h
  const bool wants_weights = uses(command, "p");
  if (wants_weights) {
    require(!(has("p") && has("h")), "give either p or h, not both");
    if (has("N")) {
      const auto n = parse_double("N", kv["N"]);
      require(n == std::floor(n) && n >= 1 && n <= kMaxQubits, "N must be an integer in [1, 12]");
      c.n_qubits = static_cast<int>(n);
      echo("N", std::to_string(c.n_qubits));
    }
    if (has("p")) {
      c.prob_vector = parse_list("p", kv["p"]);
      ProbVector pv(c.prob_vector);  // validates
      if (has("N"))
        require(static_cast<int>(c.prob_vector.size()) == c.n_qubits,
                "p has " + std::to_string(c.prob_vector.size()) + " entries but N = " + std::to_string(c.n_qubits));
      c.n_qubits = static_cast<int>(c.prob_vector.size());
      if (c.n_qubits == 2) c.h = pv.h();
      echo("p", join(c.prob_vector));
    } else if (has("h")) {
      const double h = parse_double("h", kv["h"]);
      require(h >= 0.0 && h <= 1.0, "h must lie in [0, 1], got " + kv["h"]);
      require(c.n_qubits == 2, "h defines weights only for N = 2");
      c.h = h;
      c.prob_vector = ProbVector::from_h(h).values();
      echo("h", format_double(h));
    } else {
      throw ValidationError("missing weights: give p (comma-separated) or h");
    }
    const bool origin_volume_case = command == Command::volume && !has("r-ts");
    if (c.h && !origin_volume_case)
      require(*c.h > 0.0, "h must lie in (0, 1]; h = 0 is excluded (the laws and preimage coordinates are singular)");
  }

  if (uses(command, "r-ts") && has("r-ts")) {
    c.r_ts = parse_double("r-ts", kv["r-ts"]);
    require(*c.r_ts >= 0.0 && *c.r_ts <= 1.0, "r-ts must lie in [0, 1], got " + kv["r-ts"]);
    echo("r-ts", format_double(*c.r_ts));
  }
  if (has("eps")) c.eps = parse_double("eps", kv["eps"]);
  if (uses(command, "eps")) {
    require(c.eps > 0.0 && c.eps < 1.0, "eps must lie in (0, 1), got " + format_double(c.eps));
    echo("eps", format_double(c.eps));
  }
  if (has("eps-grid")) c.eps_grid = parse_list("eps-grid", kv["eps-grid"]);
  if (uses(command, "eps-grid")) {
    for (double e : c.eps_grid) require(e > 0.0 && e < 1.0, "eps-grid entries must lie in (0, 1)");
    echo("eps-grid", join(c.eps_grid));
  }
  if (has("grid")) {
    const auto g = parse_u64("grid", kv["grid"]);
    require(g >= 2 && g <= 10'000'000, "grid must lie in [2, 1e7]");
    c.grid = static_cast<int>(g);
  }
  if (uses(command, "grid")) echo("grid", std::to_string(c.grid));
  if (has("p-test")) c.p_test = parse_double("p-test", kv["p-test"]);
  if (uses(command, "p-test")) {
    require(c.p_test > 0.0 && c.p_test <= 0.5, "p-test must lie in (0, 0.5]");
    echo("p-test", format_double(c.p_test));
  }
  if (has("v-eps")) c.v_eps = parse_double("v-eps", kv["v-eps"]);
  if (uses(command, "v-eps")) {
    require(c.v_eps > 0.0, "v-eps must be positive");
    echo("v-eps", format_double(c.v_eps));
  }
  if (has("model")) {
    const std::string m = kv["model"];
    require(m == "p2" || m == "pn", "model must be 'p2' or 'pn'");
    c.model = m == "p2" ? FitModel::p2 : FitModel::pn;
  }
  if (uses(command, "model")) echo("model", c.model == FitModel::p2 ? "p2" : "pn");
  if (has("placement")) {
    const std::string m = kv["placement"];
    require(m == "fixed" || m == "eps", "placement must be 'fixed' or 'eps'");
    c.placement = m == "fixed" ? BinPlacement::fixed_grid : BinPlacement::eps_spaced;
  }
  if (uses(command, "placement")) echo("placement", c.placement == BinPlacement::fixed_grid ? "fixed" : "eps");

  const bool table_default =
      command == Command::sample || command == Command::pdf || command == Command::sweep_eps;
  c.format = has("format") ? kv["format"] : (table_default ? "csv" : "json");
  require(c.format == "csv" || c.format == "json", "format must be 'csv' or 'json'");
  echo("format", c.format);
  if (has("output")) c.output_path = kv["output"];

  // command-specific cross checks
  if (command == Command::sample) {
    if (c.r_ts) require(c.n_qubits == 2, "preimage sampling (r-ts) needs N = 2");
    if (c.ensemble == Ensemble::separable) require(c.n_qubits == 2, "the separable ensemble needs N = 2");
  }
  if (command == Command::pdf) {
    require(c.n_qubits >= 2 && c.n_qubits <= 10, "pdf needs N in [2, 10]");
    if (c.ensemble == Ensemble::separable) {
      require(c.n_qubits == 2, "the separable law needs N = 2");
      require(*c.h < 1.0, "the separable law needs h < 1");
    }
  }
  if (command == Command::volume || command == Command::avg_state)
    require(c.n_qubits == 2, to_string(command) + " needs two-qubit weights");
  if (command == Command::volume && !c.r_ts) require(*c.h <= c.eps, "origin volume needs h <= eps");
  if (command == Command::avg_state) {
    require(c.r_ts.has_value(), "avg-state needs r-ts");
    if (c.ensemble == Ensemble::separable)
      require(*c.r_ts >= *c.h, "separable preimage is empty for r-ts < h");
  }
  return c;
}

// ---- dispatch ----

namespace {

struct Output {
  Table table;
  json result;
};

// Runs body(sampler, i) for i in [0, n) with chunk k on stream base + k.
template <class F>
void chunked(std::uint64_t n, RngSeed seed, F&& body) {
  constexpr std::uint64_t chunk = 4096;
  for (std::uint64_t k = 0; k * chunk < n; ++k) {
    Sampler s({seed.seed, seed.stream_id + k});
    for (std::uint64_t i = k * chunk; i < std::min(n, (k + 1) * chunk); ++i) body(s, i);
  }
}

Output run_sample(const RunConfig& c) {
  Output o;
  const ProbVector p(c.prob_vector);
  if (c.r_ts) {
    const double h = *c.h;
    const BlochVector target(0.0, 0.0, *c.r_ts);
    const ProbVector ph = ProbVector::from_h(h);
    o.table.columns = {"kappa", "u", "v", "gamma", "x", "y", "z"};
    chunked(c.n_samples, c.seed, [&](Sampler& s, std::uint64_t) {
      PreimageCoords pc;
      const PureState psi = c.ensemble == Ensemble::full ? s.preimage(target, h, &pc)
                                                         : s.preimage_separable(target, h, &pc);
      const Vec3 r = cg_bloch(psi, ph);
      o.table.rows.push_back({pc.kappa, pc.u, pc.v, pc.gamma, r.x(), r.y(), r.z()});
    });
  } else {
    o.table.columns = {"x", "y", "z", "r"};
    chunked(c.n_samples, c.seed, [&](Sampler& s, std::uint64_t) {
      const PureState psi = c.ensemble == Ensemble::full ? s.haar_state(c.n_qubits) : s.product_state();
      const Vec3 r = cg_bloch(psi, p);
      o.table.rows.push_back({r.x(), r.y(), r.z(), r.norm()});
    });
  }
  o.result = to_json(o.table);
  return o;
}

Output run_pdf(const RunConfig& c) {
  Output o;
  const RadialLaw law = c.ensemble == Ensemble::separable ? RadialLaw::p2_separable(*c.h)
                        : c.n_qubits == 2                ? RadialLaw::p2(*c.h)
                                                         : RadialLaw::pn(ProbVector(c.prob_vector));
  o.table.columns = {"r", "pdf", "cdf"};
  for (int k = 0; k < c.grid; ++k) {
    const double r = static_cast<double>(k) / (c.grid - 1);
    o.table.rows.push_back({r, law.pdf(r), law.cdf(r)});
  }
  o.result = to_json(o.table);
  return o;
}

Output run_volume(const RunConfig& c) {
  Output o;
  const double h = *c.h;
  if (c.r_ts) {
    const double v = preimage_volume(h, *c.r_ts, c.v_eps, c.ensemble);
    o.table.columns = {"h", "r_ts", "v_eps", "volume"};
    o.table.rows.push_back({h, *c.r_ts, c.v_eps, v});
    o.result = {{"h", h}, {"r_ts", *c.r_ts}, {"v_eps", c.v_eps}, {"volume", v}, {"ensemble", to_string(c.ensemble)}};
  } else {
    const double v = origin_volume(h, c.eps);
    o.table.columns = {"h", "eps", "volume"};
    o.table.rows.push_back({h, c.eps, v});
    o.result = {{"h", h}, {"eps", c.eps}, {"volume", v}};
  }
  return o;
}

Output run_avg_state(const RunConfig& c) {
  Output o;
  const double h = *c.h, r = *c.r_ts;
  const AvgState a = avg_state(h, r, c.ensemble);
  const AvgStateDiagnostics d = avg_state_diagnostics(a.rho);
  const auto& k = a.coeffs;
  o.table.columns = {"h", "r_ts", "c1", "c2", "c3", "c4", "rho30", "rho03", "rho33", "rho11", "rho22", "purity",
                     "coherence_23"};
  o.table.rows.push_back({h, r, k.c1, k.c2, k.c3, k.c4, k.rho30(), k.rho03(), k.rho33(), k.rho11(), k.rho22(),
                          d.purity, d.coherence_23.real()});
  json m_re = json::array(), m_im = json::array();
  for (int i = 0; i < 4; ++i) {
    json row_re = json::array(), row_im = json::array();
    for (int j = 0; j < 4; ++j) {
      row_re.push_back(a.rho.matrix()(i, j).real());
      row_im.push_back(a.rho.matrix()(i, j).imag());
    }
    m_re.push_back(row_re);
    m_im.push_back(row_im);
  }
  o.result = {{"h", h},
              {"r_ts", r},
              {"ensemble", to_string(c.ensemble)},
              {"branch", k.branch == Branch::inside ? "inside" : "outside"},
              {"c1", k.c1},
              {"c2", k.c2},
              {"c3", k.c3},
              {"c4", k.c4},
              {"pauli", {{"30", k.rho30()}, {"03", k.rho03()}, {"33", k.rho33()}, {"11", k.rho11()}, {"22", k.rho22()}}},
              {"purity", d.purity},
              {"coherence_23", d.coherence_23.real()},
              {"symmetry_residuals", {d.symmetry_residuals[0], d.symmetry_residuals[1]}},
              {"matrix_re", m_re},
              {"matrix_im", m_im}};
  if (c.n_samples > 0) {
    const AvgStateMC mc = avg_state_mc(BlochVector(0.0, 0.0, r), h, c.ensemble, c.n_samples, c.seed);
    const auto exact = pauli_components16(a.rho.matrix());
    json pj = json::object(), se = json::object();
    double max_z = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        const auto j = static_cast<std::size_t>(4 * mu + nu);
        const std::string key = std::to_string(mu) + std::to_string(nu);
        pj[key] = mc.pauli[j];
        se[key] = mc.pauli_se[j];
        if (mc.pauli_se[j] > 0.0) max_z = std::max(max_z, std::abs(mc.pauli[j] - exact[j]) / mc.pauli_se[j]);
      }
    o.result["mc"] = {{"n", mc.n},
                      {"pauli", pj},
                      {"pauli_se", se},
                      {"frobenius_distance", (mc.rho.matrix() - a.rho.matrix()).norm()},
                      {"frobenius_se", mc.frobenius_se},
                      {"max_abs_z", max_z}};
    o.table.columns.insert(o.table.columns.end(), {"mc_n", "mc_frobenius_distance", "mc_frobenius_se", "mc_max_abs_z"});
    o.table.rows[0].insert(o.table.rows[0].end(),
                           {static_cast<double>(mc.n), (mc.rho.matrix() - a.rho.matrix()).norm(), mc.frobenius_se, max_z});
  }
  return o;
}

FitOptions fit_options(const RunConfig& c) {
  FitOptions f;
  f.model = c.model;
  f.placement = c.placement;
  return f;
}

Output run_fit(const RunConfig& c) {
  Output o;
  const FitResult f = fit_pipeline(c.p_test, c.n_samples, c.eps, c.seed, fit_options(c));
  o.result = to_json(f);
  o.table.columns = {"p_fit", "residual_sum", "eps_used", "n_used", "seed", "stream_id"};
  o.table.rows.push_back({f.p_fit, f.residual_sum, f.eps_used, static_cast<double>(f.n_used),
                          static_cast<double>(f.seed.seed), static_cast<double>(f.seed.stream_id)});
  return o;
}

Output run_sweep(const RunConfig& c) {
  Output o;
  const SweepResult s = sweep_eps(c.p_test, c.n_samples, c.eps_grid, c.seed, fit_options(c));
  o.table.columns = {"eps", "p_fit", "abs_error", "residual_sum", "best"};
  for (std::size_t i = 0; i < s.rows.size(); ++i) {
    const auto& r = s.rows[i];
    o.table.rows.push_back({r.eps, r.p_fit, r.abs_error, r.residual_sum, i == s.best ? 1.0 : 0.0});
  }
  o.result = to_json(o.table);
  o.result["best_eps"] = s.rows[s.best].eps;
  return o;
}

Output run_covariance(const RunConfig& c) {
  Output o;
  const ProbVector p(c.prob_vector);
  o.table.columns = {"trial", "deviation"};
  double worst = 0.0;
  chunked(c.n_samples, c.seed, [&](Sampler& s, std::uint64_t i) {
    const PureState psi = s.haar_state(c.n_qubits);
    const Eigen::Matrix2cd u = s.haar_unitary();
    const double d = check_covariance(psi, p, u);
    worst = std::max(worst, d);
    o.table.rows.push_back({static_cast<double>(i), d});
  });
  o.result = {{"trials", c.n_samples}, {"max_deviation", worst}, {"bound", 1e-10}, {"within_bound", worst <= 1e-10}};
  return o;
}

Metadata metadata_for(const RunConfig& c) {
  Metadata m{{"tool", "cglab"}, {"version", kVersion}, {"command", to_string(c.command)}};
  for (const auto& [k, v] : c.echo) m.emplace_back(k, v);
  return m;
}

}  // namespace

std::string run(const RunConfig& c, std::ostream& out) {
  Output o;
  switch (c.command) {
    case Command::sample: o = run_sample(c); break;
    case Command::pdf: o = run_pdf(c); break;
    case Command::volume: o = run_volume(c); break;
    case Command::avg_state: o = run_avg_state(c); break;
    case Command::fit: o = run_fit(c); break;
    case Command::sweep_eps: o = run_sweep(c); break;
    case Command::covariance_check: o = run_covariance(c); break;
  }
  const Metadata meta = metadata_for(c);
  const std::string text = c.format == "csv" ? emit_csv(meta, o.table) : emit_json(meta, o.result);

  if (c.output_path.empty()) {
    out << text;
  } else {
    std::ofstream f(c.output_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + c.output_path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write to '" + c.output_path + "' failed");
  }

  std::string line = "cglab " + to_string(c.command);
  for (const auto& [k, v] : c.echo) line += " --" + k + " " + v;
  if (!c.output_path.empty()) line += " --output " + c.output_path;
  return line;
}

}  // namespace cglab
