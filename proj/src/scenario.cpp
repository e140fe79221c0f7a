#include "mpwsn/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mpwsn/errors.hpp"

namespace mpwsn {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, sep)) {
    tok = trim(tok);
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Entry {
  int line{0};
  std::string value;
};

class Fields {
 public:
  void add(int line, const std::string& key, const std::string& value) {
    if (key == "fault") {
      faults_.push_back({line, value});
      return;
    }
    if (!known(key)) fail(line, key, "unknown field");
    if (map_.contains(key)) fail(line, key, "duplicate field (first set on line " +
                                                std::to_string(map_[key].line) + ")");
    map_[key] = {line, value};
  }

  bool has(const std::string& key) const { return map_.contains(key); }

  [[noreturn]] static void fail(int line, const std::string& key, const std::string& what) {
    throw ScenarioError("line " + std::to_string(line) + ": field '" + key + "': " + what);
  }

  const Entry& require(const std::string& key) const {
    const auto it = map_.find(key);
    if (it == map_.end()) throw ScenarioError("missing required field '" + key + "'");
    return it->second;
  }

  double number(const std::string& key) const { return to_number(key, require(key)); }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::int64_t integer(const std::string& key) const { return to_integer(key, require(key)); }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  static double to_number(const std::string& key, const Entry& e) {
    return parse_double(e.value, [&](const std::string& why) { fail(e.line, key, why); });
  }

  static std::int64_t to_integer(const std::string& key, const Entry& e) {
    std::int64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail(e.line, key, "expected an integer, got '" + e.value + "'");
    return v;
  }

  template <typename OnError>
  static double parse_double(const std::string& text, OnError on_error) {
    double v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) on_error("expected a number, got '" + text + "'");
    return v;
  }

  const std::vector<Entry>& faults() const { return faults_; }

  static bool known(const std::string& key) {
    static const std::set<std::string> keys = {
        "packets",       "packet_bits",   "bit_rate",       "link_delay",
        "queue_delay",   "tx_power",      "amp_coeff",      "rx_power",
        "path_loss_exponent", "tx_bit_time", "rx_bit_time",  "sensing_power",
        "idle_power",    "initial_energy", "max_attempts",  "control_bits",
        "loss_probability", "seed",        "schemes",        "background_nodes",
        "tau_mode",      "out",           "hops",           "distance",
        "tau",           "redundant_per_path", "area",      "nodes",
        "radio_range",   "source",        "sink",           "max_paths",
        "topology_file", "redundant_fraction"};
    return keys.contains(key);
  }

 private:
  std::map<std::string, Entry> map_;
  std::vector<Entry> faults_;
};

const std::vector<std::string> kPathKeys = {"hops", "distance", "tau", "redundant_per_path"};
const std::vector<std::string> kFieldKeys = {"area",   "nodes",     "radio_range",   "source",
                                             "sink",   "max_paths", "topology_file",
                                             "redundant_fraction"};

bool any_of_keys(const Fields& f, const std::vector<std::string>& keys) {
  for (const auto& k : keys) {
    if (f.has(k)) return true;
  }
  return false;
}

void require_non_negative(const Fields& f, const std::string& key, double v) {
  if (!(v >= 0.0)) Fields::fail(f.require(key).line, key, "must be non-negative");
}

void require_positive(const Fields& f, const std::string& key, double v) {
  if (!(v > 0.0)) Fields::fail(f.require(key).line, key, "must be positive");
}

FaultAction parse_fault(const Entry& e) {
  const auto w = words(e.value);
  const auto bad = [&](const std::string& why) { Fields::fail(e.line, "fault", why); };
  if (w.size() < 3) bad("expected 'TIME node ID' or 'TIME link U V'");
  FaultAction a;
  a.time = Fields::parse_double(w[0], bad);
  if (!(a.time >= 0.0)) bad("trigger time must be non-negative");
  const auto id = [&](const std::string& s) {
    return static_cast<NodeId>(Fields::to_integer("fault", {e.line, s}));
  };
  if (w[1] == "node" && w.size() == 3) {
    a.kind = FaultKind::NodeFail;
    a.node = id(w[2]);
  } else if (w[1] == "link" && w.size() == 4) {
    a.kind = FaultKind::LinkFail;
    a.u = id(w[2]);
    a.v = id(w[3]);
  } else {
    bad("expected 'TIME node ID' or 'TIME link U V'");
  }
  return a;
}

}  // namespace

ScenarioConfig parse_scenario(std::istream& in, const std::filesystem::path& base_dir) {
  Fields f;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScenarioError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ScenarioError("line " + std::to_string(lineno) + ": empty field name");
    f.add(lineno, key, trim(line.substr(eq + 1)));
  }

  ScenarioConfig cfg;
  cfg.base_dir = base_dir;

  cfg.packets = f.integer("packets");
  if (cfg.packets < 0) Fields::fail(f.require("packets").line, "packets", "must be non-negative");

  auto& ep = cfg.energy;
  ep.packet_bits = f.number("packet_bits");
  require_positive(f, "packet_bits", ep.packet_bits);
  cfg.link.bit_rate = f.number("bit_rate");
  require_positive(f, "bit_rate", cfg.link.bit_rate);
  cfg.link.link_delay = f.number("link_delay");
  require_non_negative(f, "link_delay", cfg.link.link_delay);
  cfg.link.queue_delay = f.number("queue_delay");
  require_non_negative(f, "queue_delay", cfg.link.queue_delay);
  ep.tx_power = f.number("tx_power");
  require_non_negative(f, "tx_power", ep.tx_power);
  ep.rx_power = f.number("rx_power");
  require_non_negative(f, "rx_power", ep.rx_power);
  ep.sensing_power = f.number("sensing_power");
  require_non_negative(f, "sensing_power", ep.sensing_power);
  cfg.initial_energy = f.number("initial_energy");
  require_non_negative(f, "initial_energy", cfg.initial_energy);

  const auto optional_nn = [&](const std::string& key, double fallback) {
    const double v = f.number_or(key, fallback);
    if (f.has(key)) require_non_negative(f, key, v);
    return v;
  };
  ep.amp_coeff = optional_nn("amp_coeff", 0.0);
  ep.path_loss_exp = optional_nn("path_loss_exponent", 2.0);
  ep.tx_bit_time = optional_nn("tx_bit_time", 1.0 / cfg.link.bit_rate);
  ep.rx_bit_time = optional_nn("rx_bit_time", 1.0 / cfg.link.bit_rate);
  cfg.idle_power = optional_nn("idle_power", 0.0);
  cfg.control_bits = f.number_or("control_bits", 100.0);
  if (f.has("control_bits")) require_positive(f, "control_bits", cfg.control_bits);
  cfg.loss_probability = optional_nn("loss_probability", 0.0);
  if (cfg.loss_probability > 1.0) {
    Fields::fail(f.require("loss_probability").line, "loss_probability", "must not exceed 1");
  }
  cfg.background_nodes = optional_nn("background_nodes", 0.0);
  cfg.max_attempts = static_cast<int>(f.integer_or("max_attempts", 5));
  if (cfg.max_attempts < 1) {
    Fields::fail(f.require("max_attempts").line, "max_attempts", "must be at least 1");
  }
  const auto seed = f.integer_or("seed", 1);
  if (seed < 0) Fields::fail(f.require("seed").line, "seed", "must be non-negative");
  cfg.seed = static_cast<std::uint64_t>(seed);

  if (f.has("schemes")) {
    cfg.schemes.clear();
    const auto& e = f.require("schemes");
    for (const auto& tok : split(e.value, ',')) {
      try {
        cfg.schemes.push_back(parse_scheme(tok));
      } catch (const InvalidParameter& err) {
        Fields::fail(e.line, "schemes", err.what());
      }
    }
  }
  if (f.has("tau_mode")) {
    const auto& e = f.require("tau_mode");
    if (e.value == "analytic") {
      cfg.tau_mode = TauMode::Analytic;
    } else if (e.value == "probed") {
      cfg.tau_mode = TauMode::Probed;
    } else {
      Fields::fail(e.line, "tau_mode", "expected 'analytic' or 'probed'");
    }
  }
  if (f.has("out")) cfg.out = f.require("out").value;
  for (const auto& e : f.faults()) cfg.faults.push_back(parse_fault(e));

  const bool path_mode = any_of_keys(f, kPathKeys);
  const bool field_mode = any_of_keys(f, kFieldKeys);
  if (path_mode && field_mode) {
    throw ScenarioError("scenario sets both explicit paths ('hops') and a field ('area'); "
                        "use exactly one");
  }
  if (!path_mode && !field_mode) {
    throw ScenarioError("missing required field 'hops' (or a field deployment via 'area')");
  }

  if (path_mode) {
    PathSettings ps;
    const auto& e = f.require("hops");
    for (const auto& tok : split(e.value, ',')) {
      const auto h = Fields::to_integer("hops", {e.line, tok});
      if (h < 1) Fields::fail(e.line, "hops", "hop counts must be at least 1");
      ps.hops.push_back(static_cast<int>(h));
    }
    if (ps.hops.empty()) Fields::fail(e.line, "hops", "at least one path is required");
    ps.distance = f.number("distance");
    require_positive(f, "distance", ps.distance);
    if (f.has("tau")) {
      const auto& t = f.require("tau");
      for (const auto& tok : split(t.value, ',')) {
        const double v = Fields::to_number("tau", {t.line, tok});
        if (!(v > 0.0)) Fields::fail(t.line, "tau", "per-hop delays must be positive");
        ps.tau.push_back(v);
      }
      if (ps.tau.size() != ps.hops.size()) {
        Fields::fail(t.line, "tau", "needs one value per entry of 'hops'");
      }
    }
    ps.redundant_per_path = static_cast<int>(f.integer_or("redundant_per_path", 2));
    if (ps.redundant_per_path < 0) {
      Fields::fail(f.require("redundant_per_path").line, "redundant_per_path",
                   "must be non-negative");
    }
    cfg.paths = std::move(ps);
  } else {
    FieldSettings fs;
    fs.spec.initial_energy = cfg.initial_energy;
    fs.spec.seed = cfg.seed;
    fs.spec.radio_range = f.number("radio_range");
    require_positive(f, "radio_range", fs.spec.radio_range);
    fs.source = static_cast<NodeId>(f.integer("source"));
    fs.sink = static_cast<NodeId>(f.integer("sink"));
    if (fs.source == fs.sink) Fields::fail(f.require("sink").line, "sink", "must differ from source");
    fs.max_paths = static_cast<int>(f.integer_or("max_paths", 5));
    fs.spec.redundant_fraction = optional_nn("redundant_fraction", 0.05);
    if (fs.spec.redundant_fraction > 1.0) {
      Fields::fail(f.require("redundant_fraction").line, "redundant_fraction",
                   "must not exceed 1");
    }
    if (f.has("topology_file")) {
      fs.topology_file = f.require("topology_file").value;
      const auto p = base_dir / fs.topology_file;
      if (!std::filesystem::exists(p)) {
        Fields::fail(f.require("topology_file").line, "topology_file",
                     "file not found: " + p.string());
      }
    } else {
      const auto& a = f.require("area");
      const auto dims = split(a.value, 'x');
      if (dims.size() != 2) Fields::fail(a.line, "area", "expected WIDTHxHEIGHT");
      fs.spec.width = Fields::to_number("area", {a.line, dims[0]});
      fs.spec.height = Fields::to_number("area", {a.line, dims[1]});
      if (!(fs.spec.width > 0.0) || !(fs.spec.height > 0.0)) {
        Fields::fail(a.line, "area", "dimensions must be positive");
      }
      const auto n = f.integer("nodes");
      if (n < 2) Fields::fail(f.require("nodes").line, "nodes", "need at least 2 nodes");
      fs.spec.node_count = static_cast<std::size_t>(n);
      if (fs.source >= n || fs.sink >= n) {
        Fields::fail(f.require("source").line, "source", "source and sink must be deployed ids");
      }
    }
    cfg.field = std::move(fs);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("cannot open scenario file " + file.string());
  try {
    return parse_scenario(in, file.parent_path());
  } catch (const ScenarioError& e) {
    throw ScenarioError(file.string() + ": " + e.what());
  }
}

const std::vector<Route>& Network::routes() const {
  const auto* r = table.routes_to(sink);
  if (!r) throw ScenarioError("no route from source to sink");
  return *r;
}

std::vector<PathProfiled> Network::profiles() const {
  std::vector<PathProfiled> out;
  for (const auto& r : routes()) out.push_back(r.profile);
  return out;
}

namespace {

Network build_lanes(const ScenarioConfig& cfg) {
  const auto& ps = *cfg.paths;
  Network net;
  net.graph = TopologyGraph(0.0);  // explicit links only
  net.source = 0;
  net.sink = 1;
  const double t = ps.distance;
  const auto add = [&](NodeId id, double x, double y, bool spare) {
    Node n;
    n.id = id;
    n.pos = {x, y};
    n.residual_energy = cfg.initial_energy;
    n.is_redundant = spare;
    net.graph.add_node(n);
  };
  add(0, 0.0, 0.0, false);
  add(1, t, 0.0, false);
  NodeId next = 2;
  std::vector<Route> routes;
  std::vector<double> lane_y;
  for (std::size_t j = 0; j < ps.hops.size(); ++j) {
    const int h = ps.hops[j];
    const double y = static_cast<double>(j + 1) * t;  // lanes far apart
    lane_y.push_back(y);
    Route r;
    r.nodes.push_back(net.source);
    for (int i = 1; i < h; ++i) {
      add(next, t * i / h, y, false);
      r.nodes.push_back(next++);
    }
    r.nodes.push_back(net.sink);
    for (std::size_t i = 0; i + 1 < r.nodes.size(); ++i) {
      net.graph.add_link(r.nodes[i], r.nodes[i + 1]);
    }
    r.profile.path_id = static_cast<int>(j) + 1;
    routes.push_back(std::move(r));
  }
  for (std::size_t j = 0; j < ps.hops.size(); ++j) {
    for (int k = 0; k < ps.redundant_per_path; ++k) {
      add(next++, t * (k + 1) / (ps.redundant_per_path + 1), lane_y[j] + 0.5, true);
    }
  }
  for (std::size_t j = 0; j < routes.size(); ++j) {
    estimate_path_params(net.graph, routes[j], cfg.link, cfg.tau_mode, cfg.energy);
    if (!ps.tau.empty()) {
      routes[j].profile.tau = ps.tau[j];
      routes[j].params.tau = ps.tau[j];
    }
  }
  net.table.source = net.source;
  net.table.topology_version = net.graph.version();
  net.table.entries[net.sink] = std::move(routes);
  return net;
}

Network build_field(const ScenarioConfig& cfg) {
  const auto& fs = *cfg.field;
  Network net;
  if (!fs.topology_file.empty()) {
    const auto p = cfg.base_dir / fs.topology_file;
    std::ifstream in(p);
    if (!in) throw ScenarioError("cannot open topology file " + p.string());
    net.graph = read_topology(in, fs.spec.radio_range);
  } else {
    net.graph = deploy_field(fs.spec);
  }
  net.source = fs.source;
  net.sink = fs.sink;
  if (!net.graph.has_node(net.source) || !net.graph.has_node(net.sink)) {
    throw ScenarioError("source or sink is not part of the topology");
  }
  net.graph.set_redundant(net.source, false);
  net.graph.set_redundant(net.sink, false);
  DiscoveryOptions opt;
  opt.max_paths = fs.max_paths;
  opt.link = cfg.link;
  opt.mode = cfg.tau_mode;
  opt.energy = cfg.energy;
  net.table = build_routing_table(net.graph, net.source, {net.sink}, opt);
  if (!net.table.routes_to(net.sink)) {
    throw ScenarioError("no route from source " + std::to_string(net.source) + " to sink " +
                        std::to_string(net.sink));
  }
  return net;
}

}  // namespace

Network build_network(const ScenarioConfig& cfg) {
  if (cfg.paths.has_value() == cfg.field.has_value()) {
    throw ScenarioError("scenario needs exactly one of explicit paths or a field deployment");
  }
  return cfg.paths ? build_lanes(cfg) : build_field(cfg);
}

TransferConfig transfer_config(const ScenarioConfig& cfg) {
  TransferConfig tc;
  tc.energy = cfg.energy;
  tc.link = cfg.link;
  tc.max_attempts = cfg.max_attempts;
  tc.control_bits = cfg.control_bits;
  tc.idle_power = cfg.idle_power;
  tc.loss_probability = cfg.loss_probability;
  tc.seed = cfg.seed;
  return tc;
}

}  // namespace mpwsn
