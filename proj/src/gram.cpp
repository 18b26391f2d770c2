#include "lassopath/gram.hpp"

namespace lassopath {

GramSystem build_gram(const ProblemInstance& inst, std::span<const Index> active,
                      double max_condition) {
  return GramSystem::build(inst.X(), active, max_condition);
}

}  // namespace lassopath
