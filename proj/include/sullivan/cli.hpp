#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sullivan/linalg.hpp"
#include "sullivan/model.hpp"

namespace sullivan::cli {

/// New even generators x̃_i = Σ_j P_ij x_j (see change_even_basis).
struct BasisChange {
  std::vector<std::string> names;
  DenseMatrix matrix;
};

/// Names of x_n and y_1 for the special-family construction.
struct FamilyHint {
  std::string xn;
  std::string y1;
};

/// Parsed contents of a model file.
///
///   # comment
///   degree 2                  default degree for later `gen` lines
///   gen x1 x2 4               one or more names, optional degree last
///   d y1 = x1^2 - 1/2*x1*x2
///   basis x2 x1               an ordering ℬ of the even generators (repeatable)
///   change a b                new even generators, followed by one `row` per name
///   row 1 1
///   row 1 -1
///   formal                    caller asserts formality
///   family x2 y1              x_n and y_1 for the special family
struct ModelFile {
  AlgebraPtr algebra;
  std::vector<Element> differential;
  std::vector<std::vector<std::string>> bases;
  std::optional<BasisChange> change;
  bool formal = false;
  std::optional<FamilyHint> family;

  /// The declared model with the change of basis applied.
  SullivanModel model() const;
};

/// Throws ParseError with the line and column of the first problem.
ModelFile parse_model(std::string_view text);
ModelFile parse_model_file(const std::string& path);

/// Canonical text; parse_model(serialize(f)) reproduces f.
std::string serialize(const ModelFile& f);

/// Parses a polynomial over the generators of `alg`; `column` offsets error positions.
Element parse_expression(const AlgebraPtr& alg, std::string_view text, int line = 1, int column = 1);

/// Flat `key = value` document.
class Report {
 public:
  void add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }
  void add(std::string key, long value) { add(std::move(key), std::to_string(value)); }
  void add(std::string key, bool value) { add(std::move(key), std::string(value ? "true" : "false")); }
  void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
  void append(const Report& other);

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
  std::string text() const;

  /// 0 ok, 2 when some part was refused as not computable.
  int exit_code = 0;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Options {
  std::optional<int> max_degree;
  bool bigraded = false;
  /// omega, theorem51, theorem53, family4 or auto.
  std::string construction = "auto";
  /// Print full elements in witness output.
  bool full = false;
  /// Let `bounds` build the certificates that apply to the model.
  bool certify = true;
  std::vector<std::vector<std::string>> bases;
};

/// Runs one of validate, cohomology, invariants, bounds, witness, report.
/// Library errors propagate; see exit_code_for.
Report run(const std::string& command, const ModelFile& file, const Options& options = {});

/// 1 for parse and validation failures, 2 for NotComputable, 3 for ConstructionError.
int exit_code_for(const std::exception& e);

}  // namespace sullivan::cli
