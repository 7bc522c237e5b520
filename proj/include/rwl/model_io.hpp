#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rwl/model.hpp"

namespace rwl::model {

// Contents of one or more model files; homs refer to objects by name.
struct ModelFile {
  std::vector<AlgebraRef> algebras;
  std::vector<CrwlHom> homs;
  std::vector<PreorderRef> preorders;
  std::vector<PreorderHom> preorder_homs;

  AlgebraRef algebra(const std::string& name) const;
  const CrwlHom* hom(const std::string& name) const;
  PreorderRef preorder(const std::string& name) const;
  const PreorderHom* preorder_hom(const std::string& name) const;
};

// Blocks: `algebra NAME`, `hom NAME : SRC -> TGT`, `preorder NAME`, `phom NAME : SRC -> TGT`,
// each closed by `end`. Throws TheoryError with line and column.
void parse_model_text(std::string_view text, ModelFile& into);
ModelFile load_model_files(const std::vector<std::string>& paths);

std::string print_algebra(const FiniteCrwlAlgebra& a);
std::string print_hom(const CrwlHom& h);
std::string print_preorder(const PreorderRlModel& m);

}  // namespace rwl::model
