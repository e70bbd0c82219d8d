#pragma once

#include <map>
#include <string>
#include <string_view>

namespace dispersia::detail {

// Maps JSON pointers ("/experiments/0/name") to the 1-based line where the
// value starts. The text must already be valid JSON.
class JsonLocator {
 public:
  explicit JsonLocator(std::string_view text);
  // Line of the pointer, or of its nearest located ancestor.
  int line(std::string pointer) const;

 private:
  std::map<std::string, int> lines_;
};

// 1-based line containing byte offset `pos`.
int line_of_offset(std::string_view text, std::size_t pos);

}  // namespace dispersia::detail
