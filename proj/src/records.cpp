#include "taskdraft/records.hpp"

#include <algorithm>
#include <charconv>

#include "taskdraft/error.hpp"

namespace taskdraft::text {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_delimiter(char c) { return is_space(c) || c == '\n' || c == '"' || c == '{' || c == '}' || c == '#'; }

std::string read_quoted(std::string_view input, std::size_t& pos, std::size_t line) {
  // pos sits on the opening quote.
  std::string out;
  ++pos;
  while (pos < input.size()) {
    char c = input[pos++];
    if (c == '"') return out;
    if (c == '\n') break;
    if (c == '\\') {
      if (pos >= input.size()) break;
      char e = input[pos++];
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        default: throw ParseError(line, std::string("unknown escape \\") + e);
      }
      continue;
    }
    out.push_back(c);
  }
  throw ParseError(line, "unterminated string");
}

}  // namespace

std::vector<std::vector<Token>> tokenize_lines(std::string_view input) {
  std::vector<std::vector<Token>> lines;
  std::vector<Token> current;
  std::size_t line = 1;
  std::size_t pos = 0;

  auto flush = [&] {
    if (!current.empty()) lines.push_back(std::move(current));
    current.clear();
  };

  while (pos < input.size()) {
    char c = input[pos];
    if (c == '\n') {
      flush();
      ++line;
      ++pos;
      continue;
    }
    if (is_space(c)) {
      ++pos;
      continue;
    }
    if (c == '#') {
      while (pos < input.size() && input[pos] != '\n') ++pos;
      continue;
    }
    if (c == '{' || c == '}') {
      current.push_back({c == '{' ? Token::Kind::open_brace : Token::Kind::close_brace, std::string(1, c), {}, line});
      ++pos;
      continue;
    }
    if (c == '"') {
      current.push_back({Token::Kind::string, read_quoted(input, pos, line), {}, line});
      continue;
    }
    std::size_t start = pos;
    while (pos < input.size() && !is_delimiter(input[pos]) && input[pos] != '=') ++pos;
    std::string word(input.substr(start, pos - start));
    if (pos < input.size() && input[pos] == '=') {
      if (word.empty()) throw ParseError(line, "field without key");
      ++pos;
      std::string value;
      if (pos < input.size() && input[pos] == '"') {
        value = read_quoted(input, pos, line);
      } else {
        std::size_t vstart = pos;
        while (pos < input.size() && !is_delimiter(input[pos])) ++pos;
        value = std::string(input.substr(vstart, pos - vstart));
      }
      current.push_back({Token::Kind::field, std::move(word), std::move(value), line});
      continue;
    }
    current.push_back({Token::Kind::word, std::move(word), {}, line});
  }
  flush();
  return lines;
}

Record::Record(std::size_t line, std::vector<Token> tokens) : line_(line) {
  bool first = true;
  for (auto& t : tokens) {
    switch (t.kind) {
      case Token::Kind::word:
      case Token::Kind::string:
        if (first) {
          keyword_ = std::move(t.text);
        } else {
          args_.push_back(std::move(t.text));
        }
        break;
      case Token::Kind::field:
        if (first) throw ParseError(line, "record must start with a keyword");
        for (const auto& [k, v] : fields_) {
          if (k == t.text) throw ParseError(line, "repeated field '" + t.text + "'");
        }
        fields_.emplace_back(std::move(t.text), std::move(t.value));
        break;
      case Token::Kind::open_brace:
      case Token::Kind::close_brace:
        throw ParseError(line, "unexpected '" + t.text + "'");
    }
    first = false;
  }
}

const std::string& Record::keyword() const { return keyword_; }

const std::string& Record::arg(std::size_t i, std::string_view what) const {
  if (i >= args_.size()) throw ParseError(line_, "'" + keyword_ + "' needs " + std::string(what));
  return args_[i];
}

std::optional<std::string> Record::field(std::string_view key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

const std::string& Record::require(std::string_view key) const {
  for (const auto& [k, v] : fields_) {
    if (k == key) return v;
  }
  throw ParseError(line_, "'" + keyword_ + "' needs field " + std::string(key) + "=");
}

bool Record::has_flag(std::string_view word) const {
  return std::find(args_.begin(), args_.end(), word) != args_.end();
}

void Record::allow_only(std::initializer_list<std::string_view> allowed) const {
  for (const auto& [k, v] : fields_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ParseError(line_, "unknown field '" + k + "' on '" + keyword_ + "'");
    }
  }
}

RecordFile read_record_file(std::string_view input, std::string_view magic, int max_version) {
  auto lines = tokenize_lines(input);
  if (lines.empty()) throw ParseError(1, "missing header '" + std::string(magic) + " <version>'");

  RecordFile file;
  std::size_t header_line = lines.front().front().line;
  Record header(header_line, std::move(lines.front()));
  if (header.keyword() != magic) {
    throw ParseError(header.line(), "expected header '" + std::string(magic) + "', got '" + header.keyword() + "'");
  }
  file.version = parse_int(header.arg(0, "a version"), header.line(), "version");
  if (file.version < 1 || file.version > max_version) {
    throw ParseError(header.line(), "unsupported version " + std::to_string(file.version));
  }
  file.header_args.assign(header.args().begin() + 1, header.args().end());

  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::size_t line = lines[i].front().line;
    file.records.emplace_back(line, std::move(lines[i]));
  }
  return file;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string bare_or_quoted(std::string_view s) {
  bool safe = !s.empty() && std::none_of(s.begin(), s.end(), [](char c) { return is_delimiter(c) || c == '=' || c == '\\'; });
  return safe ? std::string(s) : quote(s);
}

int parse_int(std::string_view s, std::size_t line, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace taskdraft::text
