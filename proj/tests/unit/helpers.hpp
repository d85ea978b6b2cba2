#pragma once

#include <gtest/gtest.h>

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "tgm/text.hpp"

namespace tgm::testing {

inline std::string fixture_path(const std::string& name) { return std::string(TGM_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::shared_ptr<const TypedGraphSchema> schema_of(const std::string& text) {
  auto r = parse_schema(text);
  if (!r.ok()) {
    std::string all;
    for (const auto& d : r.diagnostics) all += format_diagnostic(d) + "\n";
    ADD_FAILURE() << all;
    return std::make_shared<const TypedGraphSchema>();
  }
  return std::make_shared<const TypedGraphSchema>(std::move(*r.value));
}

inline MutationBatch batch_of(const std::string& text, const TypedGraphSchema& schema) {
  auto r = parse_instance(text, schema);
  if (!r.ok()) {
    std::string all;
    for (const auto& d : r.diagnostics) all += format_diagnostic(d) + "\n";
    ADD_FAILURE() << all;
    return {};
  }
  return std::move(r.value->batch);
}

inline TypedGraph graph_of(const std::shared_ptr<const TypedGraphSchema>& schema, const std::string& text) {
  auto r = commit(new_graph(schema), batch_of(text, *schema));
  if (!r.ok()) {
    ADD_FAILURE() << print_violations(r.report);
    return new_graph(schema);
  }
  return std::move(*r.graph);
}

}  // namespace tgm::testing
