#include <cstring>
#include <string>
#include <vector>

#include "ccusplan/instance.hpp"

namespace ccusplan {

namespace {

struct BuiltinEntry {
  const char* name;
  const char* body;
};

const BuiltinEntry kBuiltins[] = {
#include "builtin_instances.inc"
};

} // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const BuiltinEntry& e : kBuiltins) out.emplace_back(e.name);
  return out;
}

PlanningInstance builtin_instance(const std::string& name) {
  for (const BuiltinEntry& e : kBuiltins)
    if (name == e.name) return parse_instance(e.body);
  throw ValidationError("unknown builtin instance: " + name);
}

PlanningInstance resolve_instance(const std::string& ref) {
  for (const BuiltinEntry& e : kBuiltins)
    if (ref == e.name) return parse_instance(e.body);
  return load_instance(ref);
}

} // namespace ccusplan
