#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace icps::io {

using Json = nlohmann::ordered_json;

// %.17g: enough significant digits that a double round-trips exactly.
std::string fmt(double v);

// One named table: the CSV writer emits the column header and rows, the
// JSON writer attaches it under `name`. Cells keep their JSON types; the
// CSV writer renders floats with fmt(), booleans as 0/1, null as empty.
struct Block {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Json> rows;  // objects keyed by column name
};

struct Document {
  Json meta = Json::object();
  std::vector<Block> blocks;
};

// '#'-prefixed comment header carrying the meta echo, then one section per
// block: a '# block: <name>' comment line, the column header, and the rows.
void write_csv(std::ostream& os, const Document& doc);

// One top-level object: {"meta": ..., "<block name>": [rows...], ...}.
void write_json(std::ostream& os, const Document& doc);

}  // namespace icps::io
