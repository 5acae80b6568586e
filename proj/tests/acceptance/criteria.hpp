#pragma once

#include <functional>
#include <string>
#include <vector>

namespace acceptance {

struct Criterion {
  int number;
  std::string name;
  // Returns pass/fail and may append detail text.
  std::function<bool(std::string& detail)> run;
};

const std::vector<Criterion>& all_criteria();

}  // namespace acceptance
