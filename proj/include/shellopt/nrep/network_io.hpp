#pragma once

#include <iosfwd>
#include <string>

#include "shellopt/nrep/network.hpp"

namespace shellopt::nrep {

// Self-describing text format, version tagged; parameters at 17 significant
// digits so a write/read round trip is bit exact.
void save_network(const MlpNetwork& net, std::ostream& out);
void save_network(const MlpNetwork& net, const std::string& path);

MlpNetwork load_network(std::istream& in);
MlpNetwork load_network(const std::string& path);

}  // namespace shellopt::nrep
