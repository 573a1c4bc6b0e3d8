#include "shellopt/nrep/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace shellopt::nrep {

namespace {

constexpr const char* kHeader = "shellopt network v1";

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::sinusoidal: return "sinusoidal";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  throw Error("unknown activation");
}

Activation activation_from(const std::string& s) {
  if (s == "sinusoidal") return Activation::sinusoidal;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "identity") return Activation::identity;
  throw ConfigError("unknown activation kind: " + s);
}

const char* mode_name(OutputMode m) {
  switch (m) {
    case OutputMode::heightfield: return "heightfield";
    case OutputMode::surface3d: return "surface3d";
    case OutputMode::map3d: return "map3d";
  }
  throw Error("unknown output mode");
}

OutputMode mode_from(const std::string& s) {
  if (s == "heightfield") return OutputMode::heightfield;
  if (s == "surface3d") return OutputMode::surface3d;
  if (s == "map3d") return OutputMode::map3d;
  throw ConfigError("unknown output mode: " + s);
}

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void save_network(const MlpNetwork& net, std::ostream& out) {
  net.validate();
  out << kHeader << "\n";
  out << "layers";
  for (int s : net.layer_sizes) out << ' ' << s;
  out << "\n";
  for (const auto& a : net.activations)
    out << "activation " << activation_name(a.kind) << ' ' << fmt17(a.omega)
        << ' ' << fmt17(a.delta) << "\n";
  out << "output " << mode_name(net.output_mode) << "\n";
  out << "extents " << fmt17(net.extents[0]) << ' ' << fmt17(net.extents[1])
      << "\n";
  const Eigen::VectorXd p = get_params(net);
  out << "params " << p.size() << "\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) out << fmt17(p[i]) << "\n";
  if (!out) throw Error("network write failed");
}

void save_network(const MlpNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  save_network(net, out);
}

MlpNetwork load_network(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw ConfigError("not a network file (missing header)");

  std::vector<int> sizes;
  std::vector<ActivationSpec> acts;
  OutputMode mode = OutputMode::heightfield;
  std::array<double, 2> extents{1.0, 1.0};
  Eigen::VectorXd params;
  bool have_layers = false, have_output = false, have_params = false;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "layers") {
      int s;
      while (ss >> s) sizes.push_back(s);
      have_layers = true;
    } else if (key == "activation") {
      std::string kind;
      ActivationSpec a;
      if (!(ss >> kind >> a.omega >> a.delta))
        throw ConfigError("malformed activation line");
      a.kind = activation_from(kind);
      acts.push_back(a);
    } else if (key == "output") {
      std::string m;
      if (!(ss >> m)) throw ConfigError("malformed output line");
      mode = mode_from(m);
      have_output = true;
    } else if (key == "extents") {
      if (!(ss >> extents[0] >> extents[1]))
        throw ConfigError("malformed extents line");
    } else if (key == "params") {
      Eigen::Index n;
      if (!(ss >> n) || n < 0) throw ConfigError("malformed params line");
      params.resize(n);
      for (Eigen::Index i = 0; i < n; ++i)
        if (!(in >> params[i]))
          throw ConfigError("network file truncated in parameter block");
      have_params = true;
    } else {
      throw ConfigError("unknown network file key: " + key);
    }
  }
  if (!have_layers || !have_output || !have_params)
    throw ConfigError("network file missing a required section");

  MlpNetwork net = make_network(sizes, acts, mode, extents);
  if (params.size() != count_params(net))
    throw ConfigError("network file parameter count mismatch");
  set_params(net, params);
  return net;
}

MlpNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load_network(in);
}

}  // namespace shellopt::nrep
