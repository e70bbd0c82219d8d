#include "json_locator.hpp"

#include <cctype>
#include <vector>

namespace dispersia::detail {

namespace {

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class Scanner {
 public:
  Scanner(std::string_view text, std::map<std::string, int>& lines) : s_(text), lines_(lines) {}

  void run() {
    skip_ws();
    value("");
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_body() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) {
        // Keys with escapes are rare; keep the escaped character verbatim.
        out += s_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      out += s_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& ptr) {
    skip_ws();
    lines_.emplace(ptr, line_);
    if (pos_ >= s_.size()) return;
    const char c = s_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      if (s_[pos_] == '}') {
        ++pos_;
        return;
      }
      while (pos_ < s_.size()) {
        skip_ws();
        const int key_line = line_;
        const std::string key = string_body();
        const std::string child = ptr + "/" + escape_token(key);
        skip_ws();
        ++pos_;  // ':'
        value(child);
        // Anchor object members at their key.
        lines_[child] = key_line;
        skip_ws();
        if (s_[pos_++] == '}') return;
      }
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      if (s_[pos_] == ']') {
        ++pos_;
        return;
      }
      for (std::size_t i = 0; pos_ < s_.size(); ++i) {
        value(ptr + "/" + std::to_string(i));
        skip_ws();
        if (s_[pos_++] == ']') return;
      }
    } else if (c == '"') {
      string_body();
    } else {
      while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != '}' && s_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(s_[pos_])))
        ++pos_;
    }
  }

  std::string_view s_;
  std::map<std::string, int>& lines_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

JsonLocator::JsonLocator(std::string_view text) { Scanner(text, lines_).run(); }

int JsonLocator::line(std::string pointer) const {
  while (true) {
    if (auto it = lines_.find(pointer); it != lines_.end()) return it->second;
    if (pointer.empty()) return 0;
    pointer.erase(pointer.rfind('/'));
  }
}

int line_of_offset(std::string_view text, std::size_t pos) {
  int line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace dispersia::detail
