// One acceptance criterion per process so that each is its own ctest entry.

#include <CLI11.hpp>

#include <iostream>

#include "lacelab/acceptance.hpp"
#include "lacelab/errors.hpp"
#include "lacelab/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lacelab acceptance criterion"};
  int id = 0;
  std::string profile = "full";
  bool dump = false;
  app.add_option("--criterion", id, "criterion id (1..9)")->required()->check(CLI::Range(1, lacelab::kCriteria));
  app.add_option("--profile", profile, "quick or full");
  app.add_flag("--dump", dump, "print the criterion data as JSON");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto r = lacelab::run_criterion(id, lacelab::suite_profile_from(profile));
    std::cout << r.line() << "\n";
    if (dump) std::cout << r.data.dump(2) << "\n";
    return r.pass ? 0 : 1;
  } catch (const lacelab::DomainError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
