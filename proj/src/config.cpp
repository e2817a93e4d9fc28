#include "cpm/config.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cpm {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, const std::string& sep,
                 const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void RunConfig::validate() const {
  if (d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (static_cast<int>(bounds.size()) != d)
    throw std::invalid_argument("config: bounds must have d entries");
  for (int b : bounds)
    if (b < 1) throw std::invalid_argument("config: bounds entries must be >= 1");
  if (static_cast<int>(r_ranges.size()) != d)
    throw std::invalid_argument("config: r_ranges must have d entries");
  for (auto [lo, hi] : r_ranges)
    if (lo < 0.0 || hi > 1.0 || lo > hi)
      throw std::invalid_argument("config: r range must be a subinterval of [0,1]");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("config: eta must be in (0,1)");
  if (mc_samples < 1 || eval_samples < 1)
    throw std::invalid_argument("config: sample counts must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("config: eps must be in (0,1/2)");
  if (eps1 <= 0.0 || delta <= 0.0)
    throw std::invalid_argument("config: eps1 and delta must be > 0");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  for (const std::string& a : algos)
    if (a != "DG" && a != "DGIT" && a != "DGS" && a != "DGITS" && a != "Greedy" &&
        a != "GreedyS" && a != "Random")
      throw std::invalid_argument("config: unknown algorithm " + a);
}

void serialize_config(std::ostream& os, const RunConfig& cfg) {
  os << "dataset=" << cfg.dataset << "\n";
  os << "undirected=" << (cfg.undirected ? 1 : 0) << "\n";
  os << "model=" << (cfg.model == ModelKind::IC ? "ic" : "lt") << "\n";
  os << "d=" << cfg.d << "\n";
  os << "bounds=" << join<int>(cfg.bounds, ",", [](const int& v) { return std::to_string(v); })
     << "\n";
  os << "eta=" << fmt_double(cfg.eta) << "\n";
  os << "r_ranges="
     << join<std::pair<double, double>>(cfg.r_ranges, ",",
                                        [](const std::pair<double, double>& p) {
                                          return fmt_double(p.first) + ":" + fmt_double(p.second);
                                        })
     << "\n";
  os << "lambdas=" << join<double>(cfg.lambdas, ",", [](const double& v) { return fmt_double(v); })
     << "\n";
  os << "algos=" << join<std::string>(cfg.algos, ",", [](const std::string& s) { return s; })
     << "\n";
  os << "mc_samples=" << cfg.mc_samples << "\n";
  os << "eval_samples=" << cfg.eval_samples << "\n";
  os << "eps=" << fmt_double(cfg.eps) << "\n";
  os << "eps1=" << fmt_double(cfg.eps1) << "\n";
  os << "delta=" << fmt_double(cfg.delta) << "\n";
  os << "theta_cap=" << cfg.theta_cap << "\n";
  os << "seed=" << cfg.seed << "\n";
  os << "threads=" << cfg.threads << "\n";
  os << "outdir=" << cfg.outdir << "\n";
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("config: expected key=value, got " + assignment);
  std::string key = assignment.substr(0, eq);
  std::string val = assignment.substr(eq + 1);
  auto as_bool = [&] {
    if (val == "1" || val == "true") return true;
    if (val == "0" || val == "false") return false;
    throw std::invalid_argument("config: bad boolean for " + key);
  };
  if (key == "dataset") cfg.dataset = val;
  else if (key == "undirected") cfg.undirected = as_bool();
  else if (key == "model") {
    if (val == "ic") cfg.model = ModelKind::IC;
    else if (val == "lt") cfg.model = ModelKind::LT;
    else throw std::invalid_argument("config: model must be ic or lt");
  } else if (key == "d") cfg.d = std::stoi(val);
  else if (key == "bounds") {
    cfg.bounds.clear();
    for (const auto& t : split(val, ',')) cfg.bounds.push_back(std::stoi(t));
  } else if (key == "eta") cfg.eta = std::stod(val);
  else if (key == "r_ranges") {
    cfg.r_ranges.clear();
    for (const auto& t : split(val, ',')) {
      auto colon = t.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("config: r range must be lo:hi");
      cfg.r_ranges.emplace_back(std::stod(t.substr(0, colon)), std::stod(t.substr(colon + 1)));
    }
  } else if (key == "lambdas") {
    cfg.lambdas.clear();
    for (const auto& t : split(val, ',')) cfg.lambdas.push_back(std::stod(t));
  } else if (key == "algos") cfg.algos = split(val, ',');
  else if (key == "mc_samples") cfg.mc_samples = std::stoll(val);
  else if (key == "eval_samples") cfg.eval_samples = std::stoll(val);
  else if (key == "eps") cfg.eps = std::stod(val);
  else if (key == "eps1") cfg.eps1 = std::stod(val);
  else if (key == "delta") cfg.delta = std::stod(val);
  else if (key == "theta_cap") cfg.theta_cap = std::stoull(val);
  else if (key == "seed") cfg.seed = std::stoull(val);
  else if (key == "threads") cfg.threads = std::stoi(val);
  else if (key == "outdir") cfg.outdir = val;
  else throw std::invalid_argument("config: unknown key " + key);
}

RunConfig parse_config(std::istream& is) {
  RunConfig cfg;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    apply_override(cfg, line);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return parse_config(in);
}

}  // namespace cpm
