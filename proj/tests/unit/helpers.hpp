#pragma once

#include <string>

#include "readgen/subject.hpp"
#include "readgen/test_case.hpp"

namespace readgen::test_support {

inline std::string fixture(const std::string& name) { return std::string(READGEN_FIXTURE_DIR) + "/" + name; }

inline const SubjectClass& array_int_list() {
  static const SubjectClass s = load_subject(fixture("array_int_list.sub"));
  return s;
}

inline const SubjectClass& stack_subject() {
  static const SubjectClass s = load_subject(fixture("stack.sub"));
  return s;
}

inline const SubjectClass& nested_subject() {
  static const SubjectClass s = load_subject(fixture("nested.sub"));
  return s;
}

inline std::uint32_t method(const SubjectClass& s, const std::string& name, std::size_t arity) {
  return *s.find_method(name, arity);
}

inline std::uint32_t ctor(const SubjectClass& s, std::size_t arity) { return *s.find_constructor(arity); }

inline std::uint32_t target(const SubjectClass& s, const std::string& id) { return *s.find_target(id); }

// First LINE target whose source line contains `text`.
inline std::uint32_t line_target(const SubjectClass& s, const std::string& text) {
  for (const auto& t : s.targets()) {
    if (t.kind == TargetKind::kLine && t.statement != kNone && s.statement(t.statement).source.find(text) == 0) {
      return t.index;
    }
  }
  throw std::runtime_error("no line starting with " + text);
}

}  // namespace readgen::test_support
