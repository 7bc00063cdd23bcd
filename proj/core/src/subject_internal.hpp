#pragma once

#include "readgen/subject.hpp"

namespace readgen::detail {

struct ParsedClass {
  std::string name;
  int line = 0;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> routines;
};

ParsedClass parse_class(std::string_view text);

}  // namespace readgen::detail
