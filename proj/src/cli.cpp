#include "capcont/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "capcont/assisted.hpp"
#include "capcont/capopt.hpp"
#include "capcont/continuity.hpp"
#include "capcont/distance.hpp"
#include "capcont/errors.hpp"
#include "capcont/random.hpp"

namespace capcont::cli {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::kMalformedJson, what); }
[[noreturn]] void bad_parameter(const std::string& what) { throw Error(ErrorCode::kBadParameter, what); }

// --- JSON numerics -------------------------------------------------------------

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  malformed("complex entries must be numbers or [re, im] pairs");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

ComplexMatrix matrix_from_flat(const json& j, long rows, long cols) {
  if (!j.is_array() || static_cast<long>(j.size()) != rows * cols) malformed("matrix has the wrong number of entries");
  ComplexMatrix m(rows, cols);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r * cols + c]);
  return m;
}

json matrix_to_flat(const ComplexMatrix& m) {
  json flat = json::array();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) flat.push_back(complex_to_json(m(r, c)));
  return flat;
}

int positive_int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long>() < 1) malformed(std::string("field '") + key + "' must be a positive integer");
  return j[key].get<int>();
}

Dims dims_field(const json& j, long total) {
  if (!j.contains("dims")) return Dims{static_cast<int>(total)};
  const json& d = j["dims"];
  if (!d.is_array() || d.empty()) malformed("'dims' must be a nonempty array");
  Dims dims;
  for (const auto& x : d) {
    if (!x.is_number_integer() || x.get<long>() < 1) malformed("'dims' entries must be positive integers");
    dims.push_back(x.get<int>());
  }
  if (dims_product(dims) != total) malformed("'dims' do not multiply to the state dimension");
  return dims;
}

}  // namespace

// --- channel / state I/O --------------------------------------------------------

json channel_to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_flat(k));
  return {{"d_in", ch.d_in()}, {"d_out", ch.d_out()}, {"kraus", kraus}};
}

QuantumChannel channel_from_json(const json& j) {
  if (!j.is_object()) malformed("channel must be a JSON object");
  const int d_in = positive_int_field(j, "d_in");
  const int d_out = positive_int_field(j, "d_out");
  if (d_in > kMaxDimension || d_out > kMaxDimension) throw DimensionError("channel dimension exceeds limit");
  if (j.contains("choi")) {
    const long n = static_cast<long>(d_in) * d_out;
    return from_choi(ChoiMatrix{matrix_from_flat(j["choi"], n, n), d_in, d_out});
  }
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) malformed("'kraus' must be a nonempty array");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : j["kraus"]) kraus.push_back(matrix_from_flat(k, d_out, d_in));
  return QuantumChannel(d_in, d_out, std::move(kraus));
}

DensityMatrix state_from_json(const json& j) {
  if (!j.is_object()) malformed("state must be a JSON object");
  if (j.contains("vector")) {
    const json& v = j["vector"];
    if (!v.is_array() || v.empty()) malformed("'vector' must be a nonempty array");
    ComplexVector psi(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) psi(static_cast<long>(i)) = complex_from_json(v[i]);
    return PureState(psi, dims_field(j, psi.size())).density();
  }
  if (!j.contains("matrix") || !j["matrix"].is_array()) malformed("state needs 'matrix' or 'vector'");
  const long entries = static_cast<long>(j["matrix"].size());
  const long d = std::lround(std::sqrt(static_cast<double>(entries)));
  if (d < 1 || d * d != entries) malformed("'matrix' must hold d*d entries");
  return DensityMatrix(matrix_from_flat(j["matrix"], d, d), dims_field(j, d));
}

json state_to_json(const DensityMatrix& rho) { return {{"dims", rho.dims()}, {"matrix", matrix_to_flat(rho.matrix())}}; }

Ensemble ensemble_from_json(const json& j) {
  if (!j.is_object() || !j.contains("ensemble") || !j["ensemble"].is_array() || j["ensemble"].empty())
    malformed("ensemble file needs a nonempty 'ensemble' array");
  std::vector<EnsembleItem> items;
  for (const auto& item : j["ensemble"]) {
    if (!item.is_object() || !item.contains("p") || !item["p"].is_number() || !item.contains("state"))
      malformed("ensemble items need 'p' and 'state'");
    items.push_back({item["p"].get<double>(), state_from_json(item["state"])});
  }
  return Ensemble(std::move(items));
}

json ensemble_to_json(const Ensemble& ens) {
  json items = json::array();
  for (const auto& item : ens.items()) items.push_back({{"p", item.prob}, {"state", state_to_json(item.state)}});
  return {{"ensemble", items}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    malformed("'" + path + "': " + e.what());
  }
}

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> params;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) bad_parameter("parameter '" + item + "' is not key=value");
    if (!params.emplace(item.substr(0, eq), item.substr(eq + 1)).second) bad_parameter("parameter '" + item.substr(0, eq) + "' given twice");
  }
  return params;
}

class Params {
 public:
  Params(std::string name, std::map<std::string, std::string> values) : name_(std::move(name)), values_(std::move(values)) {}

  double real(const std::string& key) {
    const std::string& v = take(key);
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      bad_parameter("parameter '" + key + "' of '" + name_ + "' is not a number: " + v);
    }
  }

  int integer(const std::string& key) {
    const std::string& v = take(key);
    try {
      std::size_t pos = 0;
      const long x = std::stol(v, &pos);
      if (pos != v.size() || x < -1000000 || x > 1000000) throw std::invalid_argument(v);
      return static_cast<int>(x);
    } catch (const std::exception&) {
      bad_parameter("parameter '" + key + "' of '" + name_ + "' is not an integer: " + v);
    }
  }

  std::uint64_t seed(const std::string& key) {
    const std::string& v = take(key);
    try {
      std::size_t pos = 0;
      const unsigned long long x = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      bad_parameter("parameter '" + key + "' of '" + name_ + "' is not a seed: " + v);
    }
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  void finish() const {
    if (!values_.empty()) bad_parameter("unknown parameter '" + values_.begin()->first + "' for '" + name_ + "'");
  }

 private:
  const std::string& take(const std::string& key) {
    const auto it = values_.find(key);
    if (it == values_.end()) bad_parameter("channel '" + name_ + "' needs parameter '" + key + "'");
    taken_ = it->second;
    values_.erase(it);
    return taken_;
  }

  std::string name_;
  std::map<std::string, std::string> values_;
  std::string taken_;
};

QuantumChannel build_named(const std::string& raw_name, Params& p) {
  std::string name = raw_name;
  for (auto& c : name)
    if (c == '-') c = '_';
  if (name == "identity") return identity_channel(p.integer("d"));
  if (name == "constant") return constant_channel(p.integer("d"));
  if (name == "erasure") {
    const int d = p.integer("d");
    return erasure(d, p.real("p"));
  }
  if (name == "depolarizing") {
    const int d = p.integer("d");
    return depolarizing(d, p.real("p"));
  }
  if (name == "dephasing") return dephasing(p.real("p"));
  if (name == "sink") return sink_channel(p.integer("n"));
  if (name == "half_sink") return half_sink_channel(p.integer("n"));
  if (name == "embedded_identity") return embedded_identity(p.integer("n"));
  if (name == "truncated_classical") return truncated_classical_example(p.integer("n"));
  if (name == "truncated_quantum") return truncated_quantum_example(p.integer("n"));
  if (name == "random") {
    const int d_in = p.integer("d_in");
    const int d_out = p.integer("d_out");
    const int rank = p.has("rank") ? p.integer("rank") : d_in * d_out;
    Rng rng(p.has("seed") ? p.seed("seed") : 0);
    return random_channel(d_in, d_out, rank, rng);
  }
  throw Error(ErrorCode::kUnknownChannel, "unknown channel '" + raw_name + "'");
}

}  // namespace

QuantumChannel parse_channel_spec(const std::string& text) {
  if (text.empty()) bad_parameter("empty channel spec");
  std::error_code ec;
  if (text.find(':') == std::string::npos && std::filesystem::is_regular_file(text, ec)) {
    const json j = read_json_file(text);
    try {
      return channel_from_json(j);
    } catch (const json::exception& e) {
      malformed("'" + text + "': " + e.what());
    }
  }
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") throw Error(ErrorCode::kIo, "cannot open '" + text + "'");
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  Params params(name, colon == std::string::npos ? std::map<std::string, std::string>{} : parse_params(text.substr(colon + 1)));
  try {
    QuantumChannel ch = build_named(name, params);
    params.finish();
    return ch;
  } catch (const ArgumentError& e) {
    bad_parameter("channel '" + name + "': " + e.what());
  } catch (const DimensionError& e) {
    bad_parameter("channel '" + name + "': " + e.what());
  }
}

// --- run --------------------------------------------------------------------------

namespace {

enum class Format { kPretty, kJson, kCsv };

struct Globals {
  std::uint64_t seed = 0;
  bool json = false;
  bool csv = false;
  double tol_sdp = 1e-6;
  double tol_ent = tol::kEnt;
  int sdp_max_iters = 200;

  Format format() const { return json ? Format::kJson : csv ? Format::kCsv : Format::kPretty; }
  SdpOptions sdp() const { return {tol_sdp, sdp_max_iters}; }
};

json tolerances(const Globals& g) {
  return {{"herm", tol::kHerm}, {"trace", tol::kTrace}, {"psd", tol::kPsd}, {"eig", tol::kEig}, {"tp", tol::kTp},
          {"sdp_gap", g.tol_sdp}, {"sdp_max_iters", g.sdp_max_iters}, {"entropy", g.tol_ent}, {"opt", tol::kOpt}};
}

void check_finite(const json& j, const std::string& path) {
  if (j.is_number_float() && !std::isfinite(j.get<double>())) throw NumericError("non-finite value at " + path);
  if (j.is_object())
    for (const auto& [k, v] : j.items()) check_finite(v, path + "." + k);
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], path + "[" + std::to_string(i) + "]");
}

void print_pretty(const json& j, std::ostream& out, const std::string& prefix) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) print_pretty(v, out, prefix.empty() ? k : prefix + "." + k);
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) print_pretty(j[i], out, prefix + "[" + std::to_string(i) + "]");
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

json sdp_json(const SdpResult& r) {
  return {{"value", r.value}, {"dual_value", r.dual_value}, {"gap", r.gap()}, {"status", to_string(r.status)}, {"iterations", r.iterations}};
}

json report_json(const BoundReport& r) {
  return {{"quantity", r.quantity}, {"measured", r.measured}, {"bound", r.bound}, {"margin", r.margin}, {"epsilon", r.epsilon},
          {"n", r.n},          {"d_b", r.d_b},           {"asserted", r.asserted}, {"trial", r.trial}, {"seed", r.seed}};
}

/// Per-quantity aggregate, in first-appearance order.
json summarize(const std::vector<BoundReport>& reports, double slack) {
  json summary = json::array();
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BoundReport*>> groups;
  for (const auto& r : reports) {
    if (!groups.count(r.quantity)) order.push_back(r.quantity);
    groups[r.quantity].push_back(&r);
  }
  for (const auto& q : order) {
    const auto& g = groups[q];
    const BoundReport* worst = g.front();
    double max_measured = 0.0;
    int violations = 0;
    for (const auto* r : g) {
      if (r->margin < worst->margin) worst = r;
      max_measured = std::max(max_measured, r->measured);
      violations += r->violated(slack) ? 1 : 0;
    }
    summary.push_back({{"quantity", q},
                       {"checks", g.size()},
                       {"asserted", worst->asserted},
                       {"violations", violations},
                       {"max_measured", max_measured},
                       {"worst_margin", worst->margin},
                       {"worst_trial", worst->trial},
                       {"bound_at_worst", worst->bound}});
  }
  return summary;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index + 1)); }

std::string format_number(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

struct Outcome {
  Outcome() = default;
  Outcome(json r) : result(std::move(r)) {}

  json result;
  int exit_code = kExitOk;
  std::string csv;  // set only by trend-table commands
};

// --- command implementations ------------------------------------------------------

struct ChannelPairSpec {
  std::string a, b;
};

Outcome cmd_norm_diamond(const Globals& g, const ChannelPairSpec& spec, int probe_trials) {
  const QuantumChannel a = parse_channel_spec(spec.a);
  const QuantumChannel b = parse_channel_spec(spec.b);
  const auto map = HermitianPreservingMap::difference(a, b);
  const SdpResult r = diamond_norm(map, g.sdp());
  json result = {{"channel_a", spec.a}, {"channel_b", spec.b}, {"diamond_distance", r.value}, {"sdp", sdp_json(r)}};
  if (probe_trials > 0) result["probe"] = {{"trials", probe_trials}, {"lower_bound", diamond_lower_probe(map, probe_trials, g.seed)}};
  return {result};
}

Outcome cmd_norm_trace(const std::string& fa, const std::string& fb) {
  const DensityMatrix a = state_from_json(read_json_file(fa));
  const DensityMatrix b = state_from_json(read_json_file(fb));
  return {json{{"trace_norm", trace_distance(a, b)}, {"half_trace_norm", trace_distance_half(a, b)}}};
}

Outcome cmd_entropy(const std::string& file) {
  const DensityMatrix rho = state_from_json(read_json_file(file));
  json result = {{"dims", rho.dims()}, {"entropy", von_neumann_entropy(rho)}};
  if (rho.factor_count() >= 2) {
    const Bipartition split = Bipartition::first_second();
    result["conditional_entropy_0_given_1"] = conditional_entropy(rho, split);
    result["mutual_information_0_1"] = mutual_information(rho, split);
  }
  return {result};
}

Outcome cmd_info(const std::string& quantity, const std::string& channel_spec, const std::string& file) {
  const QuantumChannel ch = parse_channel_spec(channel_spec);
  const json input = read_json_file(file);
  json result = {{"quantity", quantity}, {"channel", channel_spec}};
  if (quantity == "coherent") {
    DensityMatrix rho = state_from_json(input);
    if (rho.factor_count() == 1) {
      if (rho.dim() % ch.d_in() != 0) throw DimensionError("state dimension is not a multiple of the channel input");
      rho = rho.with_dims(Dims{rho.dim() / ch.d_in(), ch.d_in()});
    }
    result["value"] = coherent_information(ch, rho);
  } else {
    const Ensemble ens = ensemble_from_json(input);
    result["value"] = quantity == "holevo" ? holevo_information(ch, ens) : private_information(ch, ens);
  }
  return {result};
}

json state_vector_json(const PureState& psi) {
  json v = json::array();
  for (long i = 0; i < psi.vector().size(); ++i) v.push_back(complex_to_json(psi.vector()(i)));
  return {{"dims", psi.dims()}, {"vector", v}};
}

Outcome cmd_capacity(const Globals& g, const std::string& quantity, const std::string& channel_spec, int n, int restarts, int iters,
                     int ensemble_size) {
  const QuantumChannel ch = parse_channel_spec(channel_spec);
  OptimizerOptions opts;
  opts.restarts = restarts;
  opts.max_iters = iters;
  opts.seed = g.seed;
  long din_n = 1;
  for (int i = 0; i < n; ++i) din_n = std::min<long>(din_n * ch.d_in(), kMaxDimension);
  const int m = ensemble_size > 0 ? ensemble_size : static_cast<int>(std::max<long>(2, din_n));
  NCopyReport rep = quantity == "coherent" ? n_copy_coherent_information(ch, n, opts)
                    : quantity == "holevo" ? n_copy_holevo(ch, n, m, opts)
                                           : n_copy_private(ch, n, m, opts);
  const OptimizationReport& r = rep.report;
  json result = {{"quantity", quantity},
                 {"channel", channel_spec},
                 {"n", n},
                 {"best_value", r.best_value},
                 {"per_copy", rep.per_copy},
                 {"single_letter", rep.single_letter},
                 {"superadditivity_consistent", rep.superadditivity_consistent},
                 {"converged", r.converged},
                 {"restarts", r.restarts},
                 {"best_restart", r.best_restart},
                 {"iterations", r.iterations},
                 {"restart_values", r.restart_values}};
  if (quantity != "coherent") result["ensemble_size"] = m;
  if (r.best_state) result["argmax"] = state_vector_json(*r.best_state);
  if (r.best_ensemble) result["argmax"] = ensemble_to_json(*r.best_ensemble);
  return {result};
}

struct VerifyArgs {
  std::string mode;
  ChannelPairSpec channels;
  std::vector<int> n{1};
  int trials = 0;  // 0: mode default
  int pairs = 20;
  int d_in = 2;
  int d_out = 2;
  double max_q = 0.3;
  int ensemble_size = 4;
  bool optimized = false;
  bool detail = false;
  std::vector<int> dims{2, 4, 8};
  std::vector<int> dims_a{2, 3, 4};
  std::vector<int> dims_b{2, 3, 4};
};

Outcome verify_suites(const Globals& g, const VerifyArgs& v) {
  const int trials = v.trials > 0 ? v.trials : 1000;
  json suites = json::array();
  int violations = 0;
  std::uint64_t index = 0;
  auto add = [&](const SuiteSummary& s) {
    violations += s.violations;
    suites.push_back({{"name", s.name},
                      {"d_a", s.d_a},
                      {"d_b", s.d_b},
                      {"trials", s.trials},
                      {"violations", s.violations},
                      {"worst_margin", s.worst_margin},
                      {"max_epsilon", s.max_epsilon}});
  };
  if (v.mode == "fannes") {
    for (int d : v.dims) add(fannes_suite(d, trials, derived_seed(g.seed, index++)));
  } else {
    for (int da : v.dims_a)
      for (int db : v.dims_b) add(af_suite(da, db, trials, derived_seed(g.seed, index++)));
  }
  Outcome o{json{{"mode", v.mode}, {"trials_per_suite", trials}, {"suites", suites}, {"violations", violations}}};
  o.exit_code = violations > 0 ? kExitViolation : kExitOk;
  return o;
}

Outcome verify_channels(const Globals& g, const VerifyArgs& v) {
  const bool output_entropy = v.mode != "corollaries" && v.mode != "capacity";
  const int trials = v.trials > 0 ? v.trials : 50;
  struct Pair {
    QuantumChannel a, b;
    std::string label_a, label_b;
    json meta;
  };
  std::vector<Pair> pairs;
  if (!v.channels.a.empty() || !v.channels.b.empty()) {
    if (v.channels.a.empty() || v.channels.b.empty()) throw ArgumentError("--channel-a and --channel-b go together");
    pairs.push_back({parse_channel_spec(v.channels.a), parse_channel_spec(v.channels.b), v.channels.a, v.channels.b, json::object()});
  } else {
    if (v.pairs < 1) throw ArgumentError("--pairs must be positive");
    for (int i = 0; i < v.pairs; ++i) {
      ChannelPair cp = sample_channel_pair(v.d_in, v.d_out, g.seed, static_cast<std::uint64_t>(i), v.max_q, 0.5, g.sdp());
      const std::string label = "random pair " + std::to_string(i);
      pairs.push_back({std::move(cp.n_ch), std::move(cp.m_ch), label + " N", label + " M", json{{"q", cp.q}, {"redraws", cp.redraws}}});
    }
  }

  json pair_results = json::array();
  int violations = 0;
  std::uint64_t run_index = 0;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    json runs = json::array();
    json distance;
    for (int n : v.n) {
      HarnessOptions h{n, trials, derived_seed(g.seed, 1000000 + run_index++), g.sdp()};
      VerificationRun run;
      if (output_entropy) {
        run = verify_output_entropy(pairs[p].a, pairs[p].b, h);
      } else {
        CapacityCheckOptions c;
        c.harness = h;
        c.ensemble_size = v.ensemble_size;
        c.optimized = v.optimized && n == 1;
        c.optimizer.seed = h.seed;
        run = verify_capacity_continuity(pairs[p].a, pairs[p].b, c);
      }
      const int run_violations = run.violations(g.tol_ent);
      violations += run_violations;
      distance = {{"epsilon", run.epsilon}, {"sdp", sdp_json(run.distance)}};
      json r = {{"n", n}, {"seed", h.seed}, {"trials", trials}, {"violations", run_violations}, {"summary", summarize(run.reports, g.tol_ent)}};
      if (v.detail) {
        json all = json::array();
        for (const auto& rep : run.reports) all.push_back(report_json(rep));
        r["reports"] = all;
      }
      runs.push_back(r);
    }
    json entry = {{"index", p}, {"channel_a", pairs[p].label_a}, {"channel_b", pairs[p].label_b}, {"distance", distance}, {"runs", runs}};
    if (!pairs[p].meta.empty()) entry["sampling"] = pairs[p].meta;
    pair_results.push_back(entry);
  }
  Outcome o{json{{"mode", output_entropy ? "output_entropy" : "capacity"}, {"n", v.n}, {"pairs", pair_results}, {"violations", violations}}};
  o.exit_code = violations > 0 ? kExitViolation : kExitOk;
  return o;
}

Outcome cmd_verify(const Globals& g, VerifyArgs v) {
  if (v.mode == "fannes" || v.mode == "af") return verify_suites(g, v);
  if (v.n.empty()) throw ArgumentError("--n needs at least one value");
  return verify_channels(g, v);
}

Outcome cmd_demo(const Globals& g, int n_max, std::vector<int> n_values) {
  if (n_values.empty()) {
    if (n_max < 2) throw ArgumentError("--n-max must be at least 2");
    for (int n = 2; n <= n_max; ++n) n_values.push_back(n);
  }
  const auto rows = discontinuity_demo(n_values, g.sdp());
  json table = json::array();
  std::ostringstream csv;
  csv << "n,diamond_eps,two_over_log_n,classical_lb,quantum_lb,corollary_bound\n";
  bool consistent = true;
  for (const auto& r : rows) {
    consistent = consistent && r.consistent;
    const json bound = r.corollary_bound ? json(*r.corollary_bound) : json(nullptr);
    const json qbound = r.quantum_bound ? json(*r.quantum_bound) : json(nullptr);
    table.push_back({{"n", r.n},
                     {"diamond_eps", r.diamond_eps},
                     {"two_over_log_n", r.two_over_log_n},
                     {"classical_lb", r.classical_lb},
                     {"quantum_lb", r.quantum_lb},
                     {"corollary_bound", bound},
                     {"quantum_eps", r.quantum_eps},
                     {"quantum_bound", qbound},
                     {"gap_over_eps", r.classical_lb / r.diamond_eps},
                     {"consistent", r.consistent},
                     {"sdp_status", to_string(r.status)}});
    csv << r.n << ',' << format_number(r.diamond_eps) << ',' << format_number(r.two_over_log_n) << ',' << format_number(r.classical_lb) << ','
        << format_number(r.quantum_lb) << ',' << (r.corollary_bound ? format_number(*r.corollary_bound) : "") << '\n';
  }
  Outcome o{json{{"demo", "discontinuity"}, {"rows", table}, {"consistent", consistent}}};
  o.csv = csv.str();
  o.exit_code = consistent ? kExitOk : kExitViolation;
  return o;
}

struct AssistedArgs {
  std::optional<double> q2n, q2m, p1, p2, eps, big_delta;
  double logd = 1.0;
  double p = 0.0;
};

Outcome cmd_assisted_bounds(const AssistedArgs& a) {
  if (!a.q2n || !a.p1) throw ArgumentError("--q2n and --p1 are required");
  json result = {{"q2n", *a.q2n}, {"p1", *a.p1}, {"logd", a.logd}, {"simulation_upper_bound", simulation_upper_bound(*a.q2n, *a.p1, a.logd)}};
  if (a.p2 && a.q2m) {
    result["p2"] = *a.p2;
    result["q2m"] = *a.q2m;
    result["mutual_gap_bound"] = mutual_gap_bound(*a.q2n, *a.q2m, *a.p1, *a.p2, a.logd);
  }
  if (a.eps && a.big_delta) {
    const double delta = continuity_delta(*a.eps, *a.big_delta, a.logd);
    result["eps"] = *a.eps;
    result["big_delta"] = *a.big_delta;
    result["continuity_delta"] = delta;
    if (a.p2) {
      const RescaledMixing q = colinear_rescale(MixingGeometry(*a.p1, *a.p2, *a.big_delta, std::min(delta, *a.big_delta), a.logd));
      result["q1"] = q.q1;
      result["q2"] = q.q2;
      result["gap_bound"] = std::min(q.q1, q.q2) * a.logd;
    }
  }
  return {result};
}

Outcome cmd_assisted_erasure(double p) {
  const CapacityInterval qb = erasure_qb_bounds(p);
  return {json{{"p", p}, {"q2", erasure_q2(p)}, {"qb_lower", qb.lower}, {"qb_upper", qb.upper}}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum channel continuity laboratory: channel distances, entropic quantities, capacity proxies and continuity checks.",
               "capcont"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw");
  auto* json_flag = app.add_flag("--json", g.json, "Emit a JSON report");
  app.add_flag("--csv", g.csv, "Emit CSV (trend tables only)")->excludes(json_flag);
  app.add_option("--tol-sdp", g.tol_sdp, "Relative SDP gap tolerance")->check(CLI::PositiveNumber);
  app.add_option("--tol-ent", g.tol_ent, "Slack before a margin counts as a violation")->check(CLI::NonNegativeNumber);
  app.add_option("--sdp-max-iters", g.sdp_max_iters, "Interior-point iteration cap")->check(CLI::PositiveNumber);

  ChannelPairSpec pair;
  int probe_trials = 200;
  std::string state_a, state_b, state_file, channel_spec, input_file;
  int n_copies = 1, restarts = 16, iters = 2000, ensemble_size = 0;
  VerifyArgs verify;
  int n_max = 8;
  std::vector<int> n_values;
  AssistedArgs assisted;

  auto* norm = app.add_subcommand("norm", "Distances between channels or states");
  norm->require_subcommand(1);
  auto* norm_diamond = norm->add_subcommand("diamond", "Diamond distance of two channels by SDP");
  norm_diamond->add_option("--a,--channel-a", pair.a, "First channel (spec or JSON file)")->required();
  norm_diamond->add_option("--b,--channel-b", pair.b, "Second channel (spec or JSON file)")->required();
  norm_diamond->add_option("--probe-trials", probe_trials, "Random pure-input probes for a lower bound (0 disables)")->check(CLI::NonNegativeNumber);
  auto* norm_trace = norm->add_subcommand("trace", "Trace norm of the difference of two states");
  norm_trace->add_option("--state-a", state_a)->required();
  norm_trace->add_option("--state-b", state_b)->required();

  auto* entropy = app.add_subcommand("entropy", "Entropies of a state file");
  entropy->add_option("--state", state_file)->required();

  auto* info = app.add_subcommand("info", "Information quantity of a channel at a fixed input");
  std::string info_quantity;
  info->add_option("quantity", info_quantity)->required()->check(CLI::IsMember({"coherent", "holevo", "private"}));
  info->add_option("--channel", channel_spec)->required();
  info->add_option("--input", input_file, "State file (coherent) or ensemble file (holevo, private)")->required();

  auto* capacity = app.add_subcommand("capacity", "Optimized single-letter or n-copy capacity proxy");
  std::string cap_quantity;
  capacity->add_option("quantity", cap_quantity)->required()->check(CLI::IsMember({"coherent", "holevo", "private"}));
  capacity->add_option("--channel", channel_spec)->required();
  capacity->add_option("--n", n_copies, "Number of channel copies")->check(CLI::PositiveNumber);
  capacity->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
  capacity->add_option("--iters", iters)->check(CLI::NonNegativeNumber);
  capacity->add_option("--ensemble-size", ensemble_size, "Ensemble size (default max(2, d_in^n))")->check(CLI::NonNegativeNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Check continuity inequalities on sampled instances");
  verify_cmd->add_option("mode", verify.mode)
      ->required()
      ->check(CLI::IsMember({"theorem3", "output-entropy", "fannes", "af", "corollaries", "capacity"}));
  verify_cmd->add_option("--channel-a", verify.channels.a, "First channel; random pairs when omitted");
  verify_cmd->add_option("--channel-b", verify.channels.b);
  verify_cmd->add_option("--n", verify.n, "Copy counts, comma separated")->delimiter(',');
  verify_cmd->add_option("--trials", verify.trials, "Inputs per pair (default 50) or pairs per suite (default 1000)");
  verify_cmd->add_option("--pairs", verify.pairs, "Random channel pairs when no channels are given");
  verify_cmd->add_option("--d-in", verify.d_in)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--d-out", verify.d_out)->check(CLI::PositiveNumber);
  verify_cmd->add_option("--max-q", verify.max_q, "Largest mixing weight of the random perturbation");
  verify_cmd->add_option("--ensemble-size", verify.ensemble_size)->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--optimized", verify.optimized, "Add non-asserting optimizer comparisons");
  verify_cmd->add_flag("--detail", verify.detail, "Include every individual check");
  verify_cmd->add_option("--d", verify.dims, "Dimensions for the Fannes suite")->delimiter(',');
  verify_cmd->add_option("--d-a", verify.dims_a, "A dimensions for the Alicki-Fannes suite")->delimiter(',');
  verify_cmd->add_option("--d-b", verify.dims_b, "B dimensions for the Alicki-Fannes suite")->delimiter(',');

  auto* demo = app.add_subcommand("demo", "Demonstrations");
  demo->require_subcommand(1);
  auto* demo_disc = demo->add_subcommand("discontinuity", "Capacity gap versus distance for the truncated examples");
  demo_disc->add_option("--n-max", n_max)->check(CLI::Range(2, 63));
  demo_disc->add_option("--n-values", n_values, "Explicit truncation levels, comma separated")->delimiter(',');

  auto* assisted_cmd = app.add_subcommand("assisted", "Assisted-capacity continuity arithmetic");
  assisted_cmd->require_subcommand(1);
  auto* assisted_bounds = assisted_cmd->add_subcommand("bounds", "Simulation and mutual gap bounds");
  assisted_bounds->add_option("--q2n", assisted.q2n);
  assisted_bounds->add_option("--q2m", assisted.q2m);
  assisted_bounds->add_option("--p1", assisted.p1);
  assisted_bounds->add_option("--p2", assisted.p2);
  assisted_bounds->add_option("--logd", assisted.logd);
  assisted_bounds->add_option("--eps", assisted.eps);
  assisted_bounds->add_option("--big-delta", assisted.big_delta);
  auto* assisted_erasure = assisted_cmd->add_subcommand("erasure", "Erasure channel assisted capacities");
  assisted_erasure->add_option("--p", assisted.p)->required();

  std::vector<const char*> argv{"capcont"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    std::string command;
    Outcome o;
    if (*norm_diamond) {
      command = "norm diamond";
      o = cmd_norm_diamond(g, pair, probe_trials);
    } else if (*norm_trace) {
      command = "norm trace";
      o = cmd_norm_trace(state_a, state_b);
    } else if (*entropy) {
      command = "entropy";
      o = cmd_entropy(state_file);
    } else if (*info) {
      command = "info " + info_quantity;
      o = cmd_info(info_quantity, channel_spec, input_file);
    } else if (*capacity) {
      command = "capacity " + cap_quantity;
      o = cmd_capacity(g, cap_quantity, channel_spec, n_copies, restarts, iters, ensemble_size);
    } else if (*verify_cmd) {
      command = "verify " + verify.mode;
      o = cmd_verify(g, verify);
    } else if (*demo_disc) {
      command = "demo discontinuity";
      o = cmd_demo(g, n_max, n_values);
    } else if (*assisted_bounds) {
      command = "assisted bounds";
      o = cmd_assisted_bounds(assisted);
    } else {
      command = "assisted erasure";
      o = cmd_assisted_erasure(assisted.p);
    }
    check_finite(o.result, "result");

    switch (g.format()) {
      case Format::kCsv:
        if (o.csv.empty()) throw ArgumentError("--csv is only available for trend tables (demo discontinuity)");
        out << o.csv;
        break;
      case Format::kJson: {
        json report = {{"schema", kSchema}, {"tool", "capcont"}, {"version", kVersion}, {"command", command},
                       {"seed", g.seed},    {"tolerances", tolerances(g)}, {"result", o.result}, {"exit_code", o.exit_code}};
        out << report.dump(2) << '\n';
        break;
      }
      case Format::kPretty:
        out << "capcont " << kVersion << "  " << command << "  seed " << g.seed << '\n';
        print_pretty(o.result, out, "");
        break;
    }
    return o.exit_code;
  } catch (const Error& e) {
    err << "error[" << error_code_name(e.code()) << "]: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace capcont::cli
