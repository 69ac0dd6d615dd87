#include <cinttypes>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "picardnet/errors.hpp"
#include "picardnet/network.hpp"

namespace picardnet {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ParseError(field + ": " + what);
}

double number_at(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

}  // namespace

std::string encode(const Network& net) {
  const LayerDims d = dims(net);
  std::string out;
  out.reserve(static_cast<size_t>(param_count(net)) * 20 + 64);
  out += "{\"dims\":[";
  for (int i = 0; i < d.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(d[i]);
  }
  out += "],\"layers\":[";
  for (int li = 0; li < net.num_layers(); ++li) {
    const Layer& l = net.layer(li);
    if (li) out += ',';
    out += "{\"w\":[";
    for (int r = 0; r < l.w.rows; ++r) {
      if (r) out += ',';
      out += '[';
      for (int c = 0; c < l.w.cols; ++c) {
        if (c) out += ',';
        append_double(out, l.w(r, c));
      }
      out += ']';
    }
    out += "],\"b\":[";
    for (int r = 0; r < l.w.rows; ++r) {
      if (r) out += ',';
      append_double(out, l.b[r]);
    }
    out += "]}";
  }
  out += "]}";
  return out;
}

Network decode(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
  if (!j.is_object()) fail("(root)", "expected an object");
  if (!j.contains("dims")) fail("dims", "missing");
  if (!j["dims"].is_array()) fail("dims", "expected an array");
  std::vector<int> dv;
  for (size_t i = 0; i < j["dims"].size(); ++i) {
    const auto& e = j["dims"][i];
    if (!e.is_number_integer()) fail("dims[" + std::to_string(i) + "]", "expected an integer");
    dv.push_back(e.get<int>());
  }
  if (dv.size() < 3) fail("dims", "need at least three entries");
  for (size_t i = 0; i < dv.size(); ++i)
    if (dv[i] < 1) fail("dims[" + std::to_string(i) + "]", "must be positive");

  if (!j.contains("layers")) fail("layers", "missing");
  if (!j["layers"].is_array()) fail("layers", "expected an array");
  if (j["layers"].size() != dv.size() - 1)
    fail("layers", "expected " + std::to_string(dv.size() - 1) + " entries, got " +
                       std::to_string(j["layers"].size()));

  std::vector<Layer> layers;
  for (size_t li = 0; li < j["layers"].size(); ++li) {
    const std::string base = "layers[" + std::to_string(li) + "]";
    const auto& jl = j["layers"][li];
    if (!jl.is_object()) fail(base, "expected an object");
    if (!jl.contains("w")) fail(base + ".w", "missing");
    if (!jl.contains("b")) fail(base + ".b", "missing");
    const int rows = dv[li + 1];
    const int cols = dv[li];
    const auto& jw = jl["w"];
    if (!jw.is_array() || static_cast<int>(jw.size()) != rows)
      fail(base + ".w", "expected " + std::to_string(rows) + " rows");
    Layer l{Matrix(rows, cols), Vector(static_cast<size_t>(rows), 0.0)};
    for (int r = 0; r < rows; ++r) {
      const std::string wfield = base + ".w[" + std::to_string(r) + "]";
      const auto& row = jw[static_cast<size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != cols)
        fail(wfield, "expected " + std::to_string(cols) + " entries");
      for (int c = 0; c < cols; ++c)
        l.w(r, c) = number_at(row[static_cast<size_t>(c)],
                              wfield + "[" + std::to_string(c) + "]");
    }
    const auto& jb = jl["b"];
    if (!jb.is_array() || static_cast<int>(jb.size()) != rows)
      fail(base + ".b", "expected " + std::to_string(rows) + " entries");
    for (int r = 0; r < rows; ++r)
      l.b[static_cast<size_t>(r)] =
          number_at(jb[static_cast<size_t>(r)], base + ".b[" + std::to_string(r) + "]");
    layers.push_back(std::move(l));
  }
  try {
    return Network(std::move(layers));
  } catch (const std::exception& e) {
    throw ParseError(std::string("network: ") + e.what());
  }
}

}  // namespace picardnet
