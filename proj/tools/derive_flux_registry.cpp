#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dsol/errors.hpp"
#include "dsol/flux_derivation.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Derive the SCPPM required-flux registry from reference range grids"};
  std::string input_path;
  std::string output_path;
  bool check = false;
  app.add_option("input", input_path, "Reference ranges file")->required();
  app.add_option("output", output_path, "Registry file to write or check")
      ->required();
  app.add_flag("--check", check,
               "Verify that the output file matches instead of writing it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const auto ranges = dsol::derivation::load_reference_ranges(input_path);
    const auto entries = dsol::derivation::derive_registry(ranges);
    const std::string rendered = dsol::derivation::render_registry(entries);
    if (check) {
      std::ifstream in(output_path);
      if (!in) {
        std::fprintf(stderr, "error: cannot open %s\n", output_path.c_str());
        return 1;
      }
      std::ostringstream existing;
      existing << in.rdbuf();
      if (existing.str() != rendered) {
        std::fprintf(stderr,
                     "error: %s does not match the derived registry\n",
                     output_path.c_str());
        return 1;
      }
      std::printf("%s matches the derived registry\n", output_path.c_str());
      return 0;
    }
    std::ofstream out(output_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", output_path.c_str());
      return 1;
    }
    out << rendered;
    std::printf("wrote %zu entries to %s\n", entries.size(),
                output_path.c_str());
  } catch (const dsol::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const dsol::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const dsol::NumericError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return 0;
}
