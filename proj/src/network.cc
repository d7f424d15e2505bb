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

#include "jtree/network.h"

#include <numeric>
#include <utility>

namespace jtree {

VarId BeliefNetwork::AddVariable(std::string name, uint32_t cardinality) {
  if (name.empty()) throw NetworkError("variable name must be non-empty");
  if (cardinality < 1) {
    throw NetworkError("variable '" + name + "' must have cardinality >= 1");
  }
  if (by_name_.contains(name)) {
    throw NetworkError("duplicate variable '" + name + "'");
  }
  VarId id{static_cast<uint32_t>(slots_.size())};
  VariableSlot slot;
  slot.name = name;
  slot.cardinality = cardinality;
  slot.alive = true;
  slots_.push_back(std::move(slot));
  by_name_.emplace(std::move(name), id);
  return id;
}

const BeliefNetwork::VariableSlot& BeliefNetwork::Slot(VarId v) const {
  if (!Contains(v)) {
    throw NetworkError("unknown variable id " + std::to_string(v.value));
  }
  return slots_[v.value];
}

std::string BeliefNetwork::ArcLabel(VarId parent, VarId child) const {
  auto label = [this](VarId v) {
    return Contains(v) ? slots_[v.value].name : "#" + std::to_string(v.value);
  };
  return label(parent) + " -> " + label(child);
}

bool BeliefNetwork::HasArc(VarId parent, VarId child) const {
  return Contains(parent) && Contains(child) &&
         slots_[child.value].parents.Contains(parent);
}

bool BeliefNetwork::Reaches(VarId from, VarId to) const {
  std::vector<VarId> stack{from};
  VarSet seen{from};
  while (!stack.empty()) {
    VarId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (VarId c : slots_[v.value].children) {
      if (!seen.Contains(c)) {
        seen.Insert(c);
        stack.push_back(c);
      }
    }
  }
  return false;
}

void BeliefNetwork::AddArc(VarId parent, VarId child) {
  if (!Contains(parent) || !Contains(child)) {
    throw NetworkError("arc " + ArcLabel(parent, child) +
                       " references an unknown variable");
  }
  if (parent == child) {
    throw NetworkError("arc " + ArcLabel(parent, child) + " is a self loop");
  }
  if (HasArc(parent, child)) {
    throw NetworkError("duplicate arc " + ArcLabel(parent, child));
  }
  if (Reaches(child, parent)) {
    throw NetworkError("arc " + ArcLabel(parent, child) +
                       " would create a directed cycle");
  }
  slots_[child.value].parents.Insert(parent);
  slots_[parent.value].children.Insert(child);
  ++num_arcs_;
}

void BeliefNetwork::AddArc(std::string_view parent, std::string_view child) {
  auto p = Find(parent);
  auto c = Find(child);
  if (!p || !c) {
    throw NetworkError("arc " + std::string(parent) + " -> " +
                       std::string(child) + " references an unknown variable");
  }
  AddArc(*p, *c);
}

void BeliefNetwork::RemoveArc(VarId parent, VarId child) {
  if (!HasArc(parent, child)) {
    throw NetworkError("no arc " + ArcLabel(parent, child));
  }
  slots_[child.value].parents.Erase(parent);
  slots_[parent.value].children.Erase(child);
  --num_arcs_;
}

void BeliefNetwork::RemoveVariable(VarId v) {
  const VariableSlot& slot = Slot(v);
  if (!slot.parents.Empty() || !slot.children.Empty()) {
    throw NetworkError("variable '" + slot.name + "' still has arcs");
  }
  by_name_.erase(slot.name);
  slots_[v.value] = VariableSlot{};
}

VarSet BeliefNetwork::Family(VarId v) const {
  VarSet f = Slot(v).parents;
  f.Insert(v);
  return f;
}

std::optional<VarId> BeliefNetwork::Find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarId BeliefNetwork::Require(std::string_view name) const {
  auto v = Find(name);
  if (!v) throw NetworkError("unknown variable '" + std::string(name) + "'");
  return *v;
}

std::vector<VarId> BeliefNetwork::Variables() const {
  std::vector<VarId> out;
  out.reserve(by_name_.size());
  for (uint32_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].alive) out.push_back(VarId{i});
  }
  return out;
}

std::vector<Arc> BeliefNetwork::Arcs() const {
  std::vector<Arc> out;
  out.reserve(num_arcs_);
  for (uint32_t i = 0; i < slots_.size(); ++i) {
    for (VarId c : slots_[i].children) out.push_back(Arc{VarId{i}, c});
  }
  return out;
}

bool BeliefNetwork::IsPolytree() const {
  std::vector<uint32_t> parent(slots_.size());
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Arc& arc : Arcs()) {
    uint32_t a = find(arc.parent.value);
    uint32_t b = find(arc.child.value);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

}  // namespace jtree
