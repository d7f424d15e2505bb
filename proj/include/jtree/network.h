// Copyright 2026 The jtree Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef JTREE_NETWORK_H_
#define JTREE_NETWORK_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jtree/common.h"
#include "jtree/var_set.h"

namespace jtree {

struct Arc {
  VarId parent;
  VarId child;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// The graph part of a belief network: named variables with cardinalities
// and an acyclic set of parent->child arcs. Probability tables are not
// represented.
class BeliefNetwork {
 public:
  BeliefNetwork() = default;

  // Throws NetworkError if the name is taken or cardinality < 1.
  VarId AddVariable(std::string name, uint32_t cardinality);
  // Throws NetworkError on unknown endpoints, duplicates, self loops, or
  // when the arc would close a directed cycle. The message names the arc.
  void AddArc(VarId parent, VarId child);
  void AddArc(std::string_view parent, std::string_view child);
  void RemoveArc(VarId parent, VarId child);
  // The variable must have no incident arcs left.
  void RemoveVariable(VarId v);

  bool Contains(VarId v) const {
    return v.value < slots_.size() && slots_[v.value].alive;
  }
  bool HasArc(VarId parent, VarId child) const;
  // Throws NetworkError for unknown ids.
  const std::string& Name(VarId v) const { return Slot(v).name; }
  uint32_t Cardinality(VarId v) const { return Slot(v).cardinality; }
  const VarSet& Parents(VarId v) const { return Slot(v).parents; }
  const VarSet& Children(VarId v) const { return Slot(v).children; }
  // {v} together with its parents.
  VarSet Family(VarId v) const;

  std::optional<VarId> Find(std::string_view name) const;
  VarId Require(std::string_view name) const;

  // Live variables in increasing id order.
  std::vector<VarId> Variables() const;
  // Arcs sorted by (parent, child) id.
  std::vector<Arc> Arcs() const;
  size_t num_variables() const { return by_name_.size(); }
  size_t num_arcs() const { return num_arcs_; }
  // One past the largest id ever issued.
  uint32_t id_bound() const { return static_cast<uint32_t>(slots_.size()); }

  // True when the undirected skeleton has no cycle.
  bool IsPolytree() const;

  friend bool operator==(const BeliefNetwork& a, const BeliefNetwork& b) {
    return a.slots_ == b.slots_;
  }

 private:
  struct VariableSlot {
    std::string name;
    uint32_t cardinality = 0;
    bool alive = false;
    VarSet parents;
    VarSet children;
    friend bool operator==(const VariableSlot&, const VariableSlot&) = default;
  };

  const VariableSlot& Slot(VarId v) const;
  bool Reaches(VarId from, VarId to) const;
  std::string ArcLabel(VarId parent, VarId child) const;

  std::vector<VariableSlot> slots_;
  std::map<std::string, VarId, std::less<>> by_name_;
  size_t num_arcs_ = 0;
};

}  // namespace jtree

#endif  // JTREE_NETWORK_H_
