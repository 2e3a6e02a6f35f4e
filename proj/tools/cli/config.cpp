#include "cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "supcogarch/charexp.hpp"
#include "supcogarch/errors.hpp"

namespace supcogarch::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"model", {"type", "rate", "sigma", "nu", "theta", "grid_step"}},
      {"cogarch", {"beta", "eta"}},
      {"mixture", {"phi", "weight"}},
      {"simulation", {"variants", "horizon", "replications", "seed", "burn_in", "start", "driver_atom"}},
      {"analysis", {"increments", "lags", "tolerance_k", "tolerance_k_second_order", "bins"}},
      {"output", {"dir", "grid_step"}},
      {"verify", {"target_offset"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(field, "expected a real number, got '" + t + "'");
  return v;
}

std::uint64_t to_uint(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(field, "expected a nonnegative integer, got '" + t + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

std::vector<double> to_doubles(const std::string& field, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(to_double(field, item));
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += fmt(xs[i]);
  }
  return out;
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()), e.message());
  }

  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      if (body.empty()) throw ConfigError(section, "keys must live inside a section");
      throw ConfigError(section, "unknown section");
    }
    for (const auto& [key, value] : body)
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
  }

  ExperimentConfig c;
  auto get = [&](const char* section, const char* key) -> std::optional<std::string> {
    const auto v = tree.get_optional<std::string>(pt::ptree::path_type(std::string(section) + "." + key, '.'));
    if (!v) return std::nullopt;
    return trim(*v);
  };
  auto real = [&](const char* section, const char* key, double& dst) {
    if (auto v = get(section, key)) dst = to_double(std::string(section) + "." + key, *v);
  };
  auto count = [&](const char* section, const char* key, auto& dst) {
    if (auto v = get(section, key)) dst = static_cast<std::remove_reference_t<decltype(dst)>>(
                                        to_uint(std::string(section) + "." + key, *v));
  };
  auto reals = [&](const char* section, const char* key, std::vector<double>& dst) {
    if (auto v = get(section, key)) dst = to_doubles(std::string(section) + "." + key, *v);
  };
  auto optional_real = [&](const char* section, const char* key, std::optional<double>& dst) {
    if (auto v = get(section, key)) {
      if (*v == "auto" || *v == "none")
        dst.reset();
      else
        dst = to_double(std::string(section) + "." + key, *v);
    }
  };

  if (auto v = get("model", "type")) {
    if (*v == "cpp")
      c.model.type = ModelType::CompoundPoisson;
    else if (*v == "vg")
      c.model.type = ModelType::VarianceGamma;
    else
      throw ConfigError("model.type", "expected 'cpp' or 'vg', got '" + *v + "'");
  }
  real("model", "rate", c.model.rate);
  real("model", "sigma", c.model.sigma);
  real("model", "nu", c.model.nu);
  real("model", "theta", c.model.theta);
  real("model", "grid_step", c.model.grid_step);
  real("cogarch", "beta", c.beta);
  real("cogarch", "eta", c.eta);
  reals("mixture", "phi", c.phi);
  reals("mixture", "weight", c.weight);

  if (auto v = get("simulation", "variants")) {
    c.variants.clear();
    for (const auto& name : split_list(*v)) {
      const auto variant = parse_variant(name);
      if (!variant) throw ConfigError("simulation.variants", "unknown variant '" + name + "'");
      c.variants.push_back(*variant);
    }
  }
  real("simulation", "horizon", c.horizon);
  count("simulation", "replications", c.replications);
  count("simulation", "seed", c.seed);
  optional_real("simulation", "burn_in", c.burn_in);
  if (auto v = get("simulation", "start")) {
    if (*v == "stationary")
      c.stationary_start = true;
    else if (*v == "mean")
      c.stationary_start = false;
    else
      throw ConfigError("simulation.start", "expected 'stationary' or 'mean', got '" + *v + "'");
  }
  count("simulation", "driver_atom", c.driver_atom);

  reals("analysis", "increments", c.increments);
  reals("analysis", "lags", c.lags);
  real("analysis", "tolerance_k", c.tolerance_k);
  real("analysis", "tolerance_k_second_order", c.tolerance_k_second_order);
  count("analysis", "bins", c.histogram_bins);

  if (auto v = get("output", "dir")) c.output_dir = *v;
  optional_real("output", "grid_step", c.output_grid_step);
  real("verify", "target_offset", c.target_offset);
  return c;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[model]\n";
  out << "type = " << (c.model.type == ModelType::CompoundPoisson ? "cpp" : "vg") << '\n';
  out << "rate = " << fmt(c.model.rate) << '\n';
  out << "sigma = " << fmt(c.model.sigma) << '\n';
  out << "nu = " << fmt(c.model.nu) << '\n';
  out << "theta = " << fmt(c.model.theta) << '\n';
  out << "grid_step = " << fmt(c.model.grid_step) << '\n';
  out << "\n[cogarch]\n";
  out << "beta = " << fmt(c.beta) << '\n';
  out << "eta = " << fmt(c.eta) << '\n';
  out << "\n[mixture]\n";
  out << "phi = " << fmt_list(c.phi) << '\n';
  out << "weight = " << fmt_list(c.weight) << '\n';
  out << "\n[simulation]\n";
  out << "variants = ";
  for (std::size_t i = 0; i < c.variants.size(); ++i) out << (i ? ", " : "") << to_string(c.variants[i]);
  out << '\n';
  out << "horizon = " << fmt(c.horizon) << '\n';
  out << "replications = " << c.replications << '\n';
  out << "seed = " << c.seed << '\n';
  out << "burn_in = " << (c.burn_in ? fmt(*c.burn_in) : "auto") << '\n';
  out << "start = " << (c.stationary_start ? "stationary" : "mean") << '\n';
  out << "driver_atom = " << c.driver_atom << '\n';
  out << "\n[analysis]\n";
  out << "increments = " << fmt_list(c.increments) << '\n';
  out << "lags = " << fmt_list(c.lags) << '\n';
  out << "tolerance_k = " << fmt(c.tolerance_k) << '\n';
  out << "tolerance_k_second_order = " << fmt(c.tolerance_k_second_order) << '\n';
  out << "bins = " << c.histogram_bins << '\n';
  out << "\n[output]\n";
  out << "dir = " << c.output_dir << '\n';
  out << "grid_step = " << (c.output_grid_step ? fmt(*c.output_grid_step) : "none") << '\n';
  out << "\n[verify]\n";
  out << "target_offset = " << fmt(c.target_offset) << '\n';
  return out.str();
}

void validate(const ExperimentConfig& c) {
  if (c.model.type == ModelType::CompoundPoisson) {
    if (!positive_finite(c.model.rate)) throw ConfigError("model.rate", "must be positive and finite");
  } else {
    if (!positive_finite(c.model.sigma)) throw ConfigError("model.sigma", "must be positive and finite");
    if (!positive_finite(c.model.nu)) throw ConfigError("model.nu", "must be positive and finite");
    if (c.model.theta != 0.0) throw ConfigError("model.theta", "the driver must have mean zero");
    if (!positive_finite(c.model.grid_step)) throw ConfigError("model.grid_step", "must be positive and finite");
  }
  if (!positive_finite(c.beta)) throw ConfigError("cogarch.beta", "must be positive and finite");
  if (!positive_finite(c.eta)) throw ConfigError("cogarch.eta", "must be positive and finite");

  if (c.phi.empty()) throw ConfigError("mixture.phi", "at least one atom is required");
  if (c.weight.size() != c.phi.size()) throw ConfigError("mixture.weight", "needs one weight per phi");
  for (double p : c.phi)
    if (!std::isfinite(p) || p < 0.0) throw ConfigError("mixture.phi", "atoms must be finite and nonnegative");
  double total = 0.0;
  for (double w : c.weight) {
    if (!positive_finite(w)) throw ConfigError("mixture.weight", "weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture.weight", "weights must sum to 1");
  auto sorted = c.phi;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ConfigError("mixture.phi", "atoms must be distinct");

  const ExponentContext ctx(make_levy(c), c.eta);
  const double bound = phi_max(ctx);
  for (double p : c.phi)
    if (!(p < bound))
      throw ConfigError("mixture.phi", "atom " + fmt(p) + " is not below phi_max = " + fmt(bound) +
                                           "; no stationary solution exists");

  if (c.variants.empty()) throw ConfigError("simulation.variants", "at least one variant is required");
  if (!positive_finite(c.horizon)) throw ConfigError("simulation.horizon", "must be positive and finite");
  if (c.replications < kMinimumReplications)
    throw ConfigError("simulation.replications", "at least " + std::to_string(kMinimumReplications) + " are required");
  if (c.burn_in && !(std::isfinite(*c.burn_in) && *c.burn_in >= 0.0))
    throw ConfigError("simulation.burn_in", "must be nonnegative and finite");
  if (c.driver_atom >= c.phi.size()) throw ConfigError("simulation.driver_atom", "no such atom");

  if (c.increments.empty()) throw ConfigError("analysis.increments", "at least one increment length is required");
  for (double r : c.increments)
    if (!positive_finite(r)) throw ConfigError("analysis.increments", "lengths must be positive");
  for (double h : c.lags)
    if (!std::isfinite(h) || h <= 0.0) throw ConfigError("analysis.lags", "lags must be positive");
  if (!positive_finite(c.tolerance_k)) throw ConfigError("analysis.tolerance_k", "must be positive");
  if (!positive_finite(c.tolerance_k_second_order))
    throw ConfigError("analysis.tolerance_k_second_order", "must be positive");
  if (c.histogram_bins == 0) throw ConfigError("analysis.bins", "at least one bin is required");

  if (c.output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
  if (c.output_grid_step && !positive_finite(*c.output_grid_step))
    throw ConfigError("output.grid_step", "must be positive");
  if (!std::isfinite(c.target_offset)) throw ConfigError("verify.target_offset", "must be finite");
}

LevyModel make_levy(const ExperimentConfig& c) {
  if (c.model.type == ModelType::CompoundPoisson) return LevyModel::compound_poisson(c.model.rate);
  return LevyModel::variance_gamma(c.model.sigma, c.model.nu, c.model.theta, c.model.grid_step);
}

SupModel make_model(const ExperimentConfig& c) {
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < c.phi.size(); ++i) atoms.push_back({c.phi[i], c.weight[i]});
  return SupModel{Mixture(std::move(atoms)), c.beta, c.eta, make_levy(c)};
}

}  // namespace supcogarch::cli
