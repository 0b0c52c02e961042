#pragma once

#include <iosfwd>
#include <string>

#include "synthnet/compression.hpp"
#include "synthnet/metrics.hpp"
#include "synthnet/network.hpp"

namespace synthnet {

// Round-trip-exact decimal text for a double (printf %.17g).
std::string format_double(double v);

// Network text format: one section per layer pair with dimensions, row-major
// full-precision weights, the terminus-layer biases, and the mask as rows of
// 0/1 characters.
void write_network(std::ostream& out, const MaskedNetwork& net);
MaskedNetwork read_network(std::istream& in);

void write_mask(std::ostream& out, const ConnectionMask& mask);
ConnectionMask read_mask(std::istream& in);

// Line format: epoch, kind, (layer,origin,terminus) triples, sparsity_after.
std::string event_to_line(const StructuralEvent& ev);
StructuralEvent event_from_line(const std::string& line);

void write_trace_csv(std::ostream& out, const MetricTrace& trace);

}  // namespace synthnet
