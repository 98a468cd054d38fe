#include "icps/output.hpp"

#include <cstdio>

namespace icps::io {

namespace {

std::string render_cell(const Json& value) {
  if (value.is_null()) return "";
  if (value.is_boolean()) return value.get<bool>() ? "1" : "0";
  if (value.is_number_float()) return fmt(value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Document& doc) {
  for (const auto& [key, value] : doc.meta.items()) os << "# " << key << ": " << render_cell(value) << "\n";
  for (const Block& block : doc.blocks) {
    os << "# block: " << block.name << "\n";
    for (std::size_t c = 0; c < block.columns.size(); ++c)
      os << (c ? "," : "") << block.columns[c];
    os << "\n";
    for (const Json& row : block.rows) {
      for (std::size_t c = 0; c < block.columns.size(); ++c)
        os << (c ? "," : "") << render_cell(row.at(block.columns[c]));
      os << "\n";
    }
  }
}

void write_json(std::ostream& os, const Document& doc) {
  Json root = Json::object();
  root["meta"] = doc.meta;
  for (const Block& block : doc.blocks) {
    Json rows = Json::array();
    for (const Json& row : block.rows) rows.push_back(row);
    root[block.name] = std::move(rows);
  }
  os << root.dump(2) << "\n";
}

}  // namespace icps::io
