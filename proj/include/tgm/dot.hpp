#pragma once

#include <string>

#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm {

/// Graphviz rendering of a schema in class-diagram style. Node types are
/// record nodes with a label and an attribute compartment. Binary edge types
/// without a property become labeled edges whose end labels follow the UML
/// convention: the interval printed at an end is the participation interval
/// of the type at the opposite end. Hyper-edges and edges with a property go
/// through a junction; a property type hangs off the junction as a dashed
/// record node. Groups become dashed clusters, constraints a note.
std::string export_dot(const TypedGraphSchema& schema);

/// Instance rendering: one record node per node, edges labeled by type.
std::string export_dot(const TypedGraph& graph);

}  // namespace tgm
