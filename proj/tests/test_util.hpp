#pragma once

#include "agks/assembly.hpp"
#include "agks/mesh.hpp"

namespace agks::testutil {

struct Problem {
  ElementKind kind;
  MeshLevel mesh;
  DofLayout layout;
  BlockPartition part;
};

inline Problem make_problem(ElementKind kind, int level, const IslandSpec& island = {}) {
  Problem p{kind, build_coarse(island), {}, {}};
  for (int l = 1; l < level; ++l) p.mesh = refine(p.mesh);
  p.layout = dof_layout(kind, p.mesh);
  p.part = partition(kind, p.mesh, p.layout);
  return p;
}

inline System assemble_contrast(const Problem& p, double m, const RhsSpec& rhs = {}) {
  return assemble(p.kind, p.mesh, p.layout, MaterialParams{m, 0.3}, rhs);
}

}  // namespace agks::testutil
