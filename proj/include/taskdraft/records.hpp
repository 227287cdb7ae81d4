#pragma once

// Line-oriented record syntax shared by every taskdraft text format.
//
//   record   := word (word | "quoted string" | key=value | key="quoted")*
//   comment  := '#' to end of line (outside quotes)
//
// `{` and `}` are standalone tokens; only the block-structured formats accept
// them. Quoted strings understand \" \\ \n \t.

#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taskdraft::text {

struct Token {
  enum class Kind { word, string, field, open_brace, close_brace };
  Kind kind = Kind::word;
  std::string text;   // word/string content, or the key of a field
  std::string value;  // field value
  std::size_t line = 0;
};

/// Splits `input` into tokens, one vector per physical line that holds any.
std::vector<std::vector<Token>> tokenize_lines(std::string_view input);

class Record {
 public:
  Record(std::size_t line, std::vector<Token> tokens);

  std::size_t line() const noexcept { return line_; }
  const std::string& keyword() const;

  /// Positional arguments after the keyword (words and quoted strings).
  const std::vector<std::string>& args() const noexcept { return args_; }
  const std::string& arg(std::size_t i, std::string_view what) const;

  std::optional<std::string> field(std::string_view key) const;
  const std::string& require(std::string_view key) const;
  bool has_flag(std::string_view word) const;

  const std::vector<std::pair<std::string, std::string>>& fields() const noexcept { return fields_; }

  /// Throws ParseError unless every field key is in `allowed`.
  void allow_only(std::initializer_list<std::string_view> allowed) const;

 private:
  std::size_t line_;
  std::string keyword_;
  std::vector<std::string> args_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Parses flat record files (no braces). The first record must be
/// `<magic> <version>`; versions above `max_version` are rejected.
struct RecordFile {
  int version = 0;
  std::vector<std::string> header_args;  // extra header words after the version
  std::vector<Record> records;
};
RecordFile read_record_file(std::string_view input, std::string_view magic, int max_version);

/// Always-quoted form of `s` with escapes.
std::string quote(std::string_view s);

/// `s` as-is if it is a safe bare word, otherwise quoted.
std::string bare_or_quoted(std::string_view s);

int parse_int(std::string_view s, std::size_t line, std::string_view what);

}  // namespace taskdraft::text
