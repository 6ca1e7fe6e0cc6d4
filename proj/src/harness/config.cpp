#include "wrom/harness/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace wrom::harness {

namespace {

const std::array<const char*, 6> kMethodNames = {"standard-pod",        "weighted-pod-mc", "weighted-pod-tensor",
                                                 "weighted-pod-smolyak", "standard-greedy", "weighted-greedy"};
const std::array<const char*, 5> kParameterNames = {"L1", "h1", "L2", "h2", "vmax"};

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

fom::Equation equation_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "stokes") return fom::Equation::Stokes;
  if (v == "navier-stokes" || v == "navierstokes" || v == "ns") return fom::Equation::NavierStokes;
  throw std::invalid_argument("unknown equation '" + s + "'");
}

rom::EstimatorMode estimator_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "exact-error") return rom::EstimatorMode::ExactError;
  if (v == "residual") return rom::EstimatorMode::Residual;
  throw std::invalid_argument("unknown greedy estimator '" + s + "'");
}

rom::WeightMode weight_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "none") return rom::WeightMode::None;
  if (v == "sqrt-density") return rom::WeightMode::SqrtDensity;
  if (v == "density") return rom::WeightMode::Density;
  throw std::invalid_argument("unknown greedy weight '" + s + "'");
}

BaselineSampling sampling_from_string(const std::string& s) {
  const std::string v = lower(s);
  if (v == "uniform") return BaselineSampling::Uniform;
  if (v == "beta") return BaselineSampling::Beta;
  throw std::invalid_argument("unknown baseline sampling '" + s + "'");
}

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string to_string(Method m) { return kMethodNames[static_cast<std::size_t>(m)]; }

Method method_from_string(const std::string& s) {
  const std::string v = lower(s);
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (v == kMethodNames[i]) return static_cast<Method>(i);
  }
  throw std::invalid_argument("unknown method '" + s + "'");
}

bool is_greedy(Method m) { return m == Method::StandardGreedy || m == Method::WeightedGreedy; }
bool is_standard(Method m) { return m == Method::StandardPOD || m == Method::StandardGreedy; }

void StudyConfig::validate() const {
  if (ranges.size() != 5 || shapes.size() != 5) throw std::invalid_argument("config: expected five parameters");
  (void)box();
  if (training_size < 1) throw std::invalid_argument("config: training_size must be at least 1");
  if (test_size < 1) throw std::invalid_argument("config: test_size must be at least 1");
  if (n_min < 0 || n_max < n_min) throw std::invalid_argument("config: need 0 <= n_min <= n_max");
  if (test_seed == training_seed) throw std::invalid_argument("config: test_seed must differ from training_seed");
  if (refinement < 1) throw std::invalid_argument("config: refinement must be at least 1");
  if (greedy_tolerance < 0) throw std::invalid_argument("config: greedy_tolerance must be non-negative");
  if (is_greedy(method) && n_max < 1) throw std::invalid_argument("config: greedy methods need n_max >= 1");
}

std::string StudyConfig::canonical() const {
  std::ostringstream os;
  os << "[study]\n";
  os << "equation = " << fom::to_string(equation) << "\n";
  os << "method = " << to_string(method) << "\n";
  os << "training_size = " << training_size << "\n";
  os << "test_size = " << test_size << "\n";
  os << "n_min = " << n_min << "\n";
  os << "n_max = " << n_max << "\n";
  os << "training_seed = " << training_seed << "\n";
  os << "test_seed = " << test_seed << "\n";
  os << "refinement = " << refinement << "\n";
  os << "baseline_sampling = " << (baseline_sampling == BaselineSampling::Uniform ? "uniform" : "beta") << "\n";
  os << "greedy_estimator = " << rom::to_string(greedy_estimator) << "\n";
  os << "greedy_weight = " << rom::to_string(greedy_weight) << "\n";
  os << "greedy_tolerance = " << number(greedy_tolerance) << "\n";
  os << "body_force_x = " << number(body_force.x()) << "\nbody_force_y = " << number(body_force.y()) << "\n";
  for (std::size_t j = 0; j < 5; ++j) {
    os << "[parameter." << kParameterNames[j] << "]\n";
    os << "lo = " << number(ranges[j].lo) << "\nhi = " << number(ranges[j].hi) << "\n";
    os << "alpha = " << number(shapes[j].alpha) << "\nbeta = " << number(shapes[j].beta) << "\n";
  }
  return os.str();
}

std::string StudyConfig::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

StudyConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  StudyConfig c;
  const auto study = tree.find("study");
  const pt::ptree empty;
  for (const auto& [key, node] : study == tree.not_found() ? empty : study->second) {
    const std::string v = node.get_value<std::string>();
    try {
      if (key == "name") c.name = v;
      else if (key == "equation") c.equation = equation_from_string(v);
      else if (key == "method") c.method = method_from_string(v);
      else if (key == "training_size") c.training_size = std::stoi(v);
      else if (key == "test_size") c.test_size = std::stoi(v);
      else if (key == "n_min") c.n_min = std::stoi(v);
      else if (key == "n_max") c.n_max = std::stoi(v);
      else if (key == "training_seed") c.training_seed = std::stoull(v);
      else if (key == "test_seed") c.test_seed = std::stoull(v);
      else if (key == "refinement") c.refinement = std::stoi(v);
      else if (key == "baseline_sampling") c.baseline_sampling = sampling_from_string(v);
      else if (key == "greedy_estimator") c.greedy_estimator = estimator_from_string(v);
      else if (key == "greedy_weight") c.greedy_weight = weight_from_string(v);
      else if (key == "greedy_tolerance") c.greedy_tolerance = std::stod(v);
      else if (key == "alpha") for (auto& s : c.shapes) s = probability::BetaParams(std::stod(v), s.beta);
      else if (key == "beta") for (auto& s : c.shapes) s = probability::BetaParams(s.alpha, std::stod(v));
      else if (key == "body_force_x") c.body_force.x() = std::stod(v);
      else if (key == "body_force_y") c.body_force.y() = std::stod(v);
      else throw std::invalid_argument("unknown key");
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("config: [study] " + key + " = '" + v + "': " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("config: [study] " + key + " = '" + v + "' is out of range");
    }
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const auto section = tree.find(std::string("parameter.") + kParameterNames[j]);
    if (section == tree.not_found()) continue;
    for (const auto& [key, node] : section->second) {
      const double v = node.get_value<double>();
      if (key == "lo") c.ranges[j].lo = v;
      else if (key == "hi") c.ranges[j].hi = v;
      else if (key == "alpha") c.shapes[j] = probability::BetaParams(v, c.shapes[j].beta);
      else if (key == "beta") c.shapes[j] = probability::BetaParams(c.shapes[j].alpha, v);
      else throw std::invalid_argument(std::string("config: unknown key '") + key + "' in [parameter." + kParameterNames[j] + "]");
    }
  }
  for (const auto& [section, node] : tree) {
    (void)node;
    if (section == "study") continue;
    bool known = false;
    for (const char* p : kParameterNames) known = known || section == std::string("parameter.") + p;
    if (!known) throw std::invalid_argument("config: unknown section [" + section + "]");
  }
  c.validate();
  return c;
}

StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_config(in);
}

}  // namespace wrom::harness
