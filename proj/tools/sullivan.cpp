#include "CLI11.hpp"

#include <iostream>
#include <sstream>

#include "sullivan/cli.hpp"
#include "sullivan/error.hpp"

namespace {

const char* kind(const std::exception& e) {
  using namespace sullivan;
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const InvalidModel*>(&e)) return "InvalidModel";
  if (dynamic_cast<const StructuralError*>(&e)) return "StructuralError";
  if (dynamic_cast<const NotComputable*>(&e)) return "NotComputable";
  if (dynamic_cast<const ConstructionError*>(&e)) return "ConstructionError";
  return "Error";
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational homotopy invariants and topological complexity bounds of pure Sullivan models"};
  std::string command;
  std::string path;
  sullivan::cli::Options options;
  int max_degree = -1;
  bool no_certify = false;
  std::vector<std::string> bases;

  app.add_option("command", command, "validate | cohomology | invariants | bounds | witness | report")
      ->required()
      ->check(CLI::IsMember({"validate", "cohomology", "invariants", "bounds", "witness", "report"}));
  app.add_option("model", path, "model file")->required();
  app.add_option("--max-degree", max_degree, "truncation degree for cohomology");
  app.add_flag("--bigraded", options.bigraded, "bigraded cohomology of A_B");
  app.add_option("--construction", options.construction, "auto | omega | theorem51 | theorem53 | family4")
      ->check(CLI::IsMember({"auto", "omega", "theorem51", "theorem53", "family4"}));
  app.add_flag("--full", options.full, "print full witness elements");
  app.add_flag("--no-certify", no_certify, "skip witness certificates in bounds");
  app.add_option("--basis", bases, "comma-separated ordering of the even generators (repeatable)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (max_degree >= 0) options.max_degree = max_degree;
  options.certify = !no_certify;
  for (const auto& b : bases) options.bases.push_back(split_commas(b));

  try {
    const auto file = sullivan::cli::parse_model_file(path);
    const auto report = sullivan::cli::run(command, file, options);
    std::cout << report.text();
    return report.exit_code;
  } catch (const std::exception& e) {
    std::cout << "error.kind = " << kind(e) << '\n' << "error.message = " << e.what() << '\n';
    return sullivan::cli::exit_code_for(e);
  }
}
