#include "synthnet/serialize.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace synthnet {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
  throw std::runtime_error("parse error: " + what);
}

std::string expect_line(std::istream& in, const std::string& context) {
  std::string line;
  if (!std::getline(in, line)) parse_fail("unexpected end of input, expected " + context);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_token(std::istream& line, const std::string& token) {
  std::string got;
  line >> got;
  if (got != token) parse_fail("expected '" + token + "', got '" + got + "'");
}

}  // namespace

void write_mask(std::ostream& out, const ConnectionMask& mask) {
  const auto& w = mask.widths();
  out << "mask_layers " << mask.pairs() << "\n";
  for (int k = 0; k < mask.pairs(); ++k) {
    out << "layer_pair " << k << " " << w[k] << " " << w[k + 1] << "\n";
    for (int i = 0; i < w[k]; ++i) {
      std::string row(w[k + 1], '0');
      for (int j = 0; j < w[k + 1]; ++j)
        if (mask.at(k, i, j)) row[j] = '1';
      out << row << "\n";
    }
  }
}

ConnectionMask read_mask(std::istream& in) {
  std::istringstream head(expect_line(in, "mask_layers"));
  expect_token(head, "mask_layers");
  int pairs = 0;
  head >> pairs;
  if (pairs < 1) parse_fail("bad mask layer count");

  std::vector<int> widths;
  std::vector<std::vector<std::string>> rows(pairs);
  for (int k = 0; k < pairs; ++k) {
    std::istringstream lp(expect_line(in, "layer_pair"));
    expect_token(lp, "layer_pair");
    int idx = 0, in_w = 0, out_w = 0;
    lp >> idx >> in_w >> out_w;
    if (idx != k || in_w < 1 || out_w < 1) parse_fail("bad layer_pair header");
    if (k == 0) widths.push_back(in_w);
    if (widths.back() != in_w) parse_fail("inconsistent layer widths");
    widths.push_back(out_w);
    for (int i = 0; i < in_w; ++i) {
      std::string row = expect_line(in, "mask row");
      if (static_cast<int>(row.size()) != out_w) parse_fail("bad mask row width");
      rows[k].push_back(row);
    }
  }

  Architecture arch{widths};
  ConnectionMask mask(arch, false);
  for (int k = 0; k < pairs; ++k)
    for (int i = 0; i < widths[k]; ++i)
      for (int j = 0; j < widths[k + 1]; ++j) {
        const char c = rows[k][i][j];
        if (c != '0' && c != '1') parse_fail("mask rows must be 0/1");
        if (c == '1') mask.set(k, i, j, true);
      }
  return mask;
}

void write_network(std::ostream& out, const MaskedNetwork& net) {
  out << "synthnet network v1\n";
  out << "layers";
  for (int w : net.arch.widths) out << " " << w;
  out << "\n";
  for (int k = 0; k < net.arch.pairs(); ++k) {
    const int in = net.arch.widths[k], out_w = net.arch.widths[k + 1];
    out << "layer_pair " << k << " " << in << " " << out_w << "\n";
    out << "weights\n";
    for (int i = 0; i < in; ++i) {
      for (int j = 0; j < out_w; ++j)
        out << (j ? " " : "") << format_double(net.weights[k].at(i, j));
      out << "\n";
    }
    out << "biases\n";
    for (int j = 0; j < out_w; ++j) out << (j ? " " : "") << format_double(net.biases[k][j]);
    out << "\n";
    out << "mask\n";
    for (int i = 0; i < in; ++i) {
      std::string row(out_w, '0');
      for (int j = 0; j < out_w; ++j)
        if (net.mask.at(k, i, j)) row[j] = '1';
      out << row << "\n";
    }
  }
  out << "end\n";
}

MaskedNetwork read_network(std::istream& in) {
  if (expect_line(in, "header") != "synthnet network v1")
    parse_fail("not a synthnet network file");
  std::istringstream layers_line(expect_line(in, "layers"));
  expect_token(layers_line, "layers");
  std::vector<int> widths;
  for (int w; layers_line >> w;) widths.push_back(w);

  Architecture arch{widths};
  if (!arch.valid()) parse_fail("bad layers line");

  MaskedNetwork net;
  net.arch = arch;
  net.mask = ConnectionMask(arch, false);
  for (int k = 0; k < arch.pairs(); ++k) {
    const int in_w = widths[k], out_w = widths[k + 1];
    std::istringstream lp(expect_line(in, "layer_pair"));
    expect_token(lp, "layer_pair");
    int idx = 0, a = 0, b = 0;
    lp >> idx >> a >> b;
    if (idx != k || a != in_w || b != out_w) parse_fail("bad layer_pair header");

    if (expect_line(in, "weights") != "weights") parse_fail("expected weights");
    Matrix w(in_w, out_w);
    for (int i = 0; i < in_w; ++i) {
      std::istringstream row(expect_line(in, "weight row"));
      for (int j = 0; j < out_w; ++j)
        if (!(row >> w.at(i, j))) parse_fail("short weight row");
    }
    net.weights.push_back(std::move(w));

    if (expect_line(in, "biases") != "biases") parse_fail("expected biases");
    std::vector<double> bias(out_w);
    {
      std::istringstream row(expect_line(in, "bias row"));
      for (int j = 0; j < out_w; ++j)
        if (!(row >> bias[j])) parse_fail("short bias row");
    }
    net.biases.push_back(std::move(bias));

    if (expect_line(in, "mask") != "mask") parse_fail("expected mask");
    for (int i = 0; i < in_w; ++i) {
      std::string row = expect_line(in, "mask row");
      if (static_cast<int>(row.size()) != out_w) parse_fail("bad mask row width");
      for (int j = 0; j < out_w; ++j) {
        if (row[j] != '0' && row[j] != '1') parse_fail("mask rows must be 0/1");
        if (row[j] == '1') net.mask.set(k, i, j, true);
      }
    }
  }
  if (expect_line(in, "end") != "end") parse_fail("expected end");
  return net;
}

std::string event_to_line(const StructuralEvent& ev) {
  std::ostringstream out;
  out << ev.epoch << " " << (ev.kind == EventKind::prune ? "prune" : "synthesize");
  for (const Connection& c : ev.connections)
    out << " (" << c.layer << "," << c.origin << "," << c.terminus << ")";
  out << " " << format_double(ev.sparsity_after);
  return out.str();
}

StructuralEvent event_from_line(const std::string& line) {
  std::istringstream in(line);
  StructuralEvent ev;
  std::string kind;
  if (!(in >> ev.epoch >> kind)) parse_fail("bad event line: " + line);
  if (kind == "prune")
    ev.kind = EventKind::prune;
  else if (kind == "synthesize")
    ev.kind = EventKind::synthesize;
  else
    parse_fail("bad event kind: " + kind);

  std::string token;
  std::vector<std::string> rest;
  while (in >> token) rest.push_back(token);
  if (rest.empty()) parse_fail("event line missing sparsity: " + line);
  ev.sparsity_after = std::stod(rest.back());
  for (std::size_t t = 0; t + 1 < rest.size(); ++t) {
    Connection c;
    if (std::sscanf(rest[t].c_str(), "(%d,%d,%d)", &c.layer, &c.origin, &c.terminus) != 3)
      parse_fail("bad connection triple: " + rest[t]);
    ev.connections.push_back(c);
  }
  return ev;
}

void write_trace_csv(std::ostream& out, const MetricTrace& trace) {
  out << "epoch,train_loss,val_accuracy,val_auc,sparsity\n";
  for (const MetricRow& row : trace)
    out << row.epoch << "," << format_double(row.train_loss) << ","
        << format_double(row.val_accuracy) << "," << format_double(row.val_auc) << ","
        << format_double(row.sparsity) << "\n";
}

}  // namespace synthnet
