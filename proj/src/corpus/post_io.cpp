#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "anxpipe/corpus.hpp"
#include "anxpipe/error.hpp"

namespace anxpipe::corpus {

namespace {

using nlohmann::json;

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

void add_post(PostCollection& out, std::set<std::string>& seen, Post post) {
  if (!seen.insert(post.id).second) throw DataError("duplicate post id: " + post.id);
  out.push_back(std::move(post));
}

PostCollection load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  PostCollection out;
  std::set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    json row;
    try {
      row = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError(at_line(path, line) + "malformed JSON: " + e.what());
    }
    if (!row.is_object()) throw DataError(at_line(path, line) + "row is not an object");
    if (!row.contains("id")) throw DataError(at_line(path, line) + "missing key \"id\"");
    if (!row.contains("text")) throw DataError(at_line(path, line) + "missing key \"text\"");
    Post post;
    const auto& id = row["id"];
    if (id.is_string()) {
      post.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      post.id = std::to_string(id.get<long long>());
    } else {
      throw DataError(at_line(path, line) + "\"id\" must be a string");
    }
    if (post.id.empty()) throw DataError(at_line(path, line) + "empty id");
    if (!row["text"].is_string()) throw DataError(at_line(path, line) + "\"text\" must be a string");
    post.raw_text = row["text"].get<std::string>();
    if (row.contains("label") && !row["label"].is_null()) {
      const auto& lab = row["label"];
      std::optional<int> value;
      if (lab.is_boolean()) {
        value = lab.get<bool>() ? 1 : 0;
      } else if (lab.is_number_integer()) {
        const auto v = lab.get<long long>();
        if (v == 0 || v == 1) value = static_cast<int>(v);
      } else if (lab.is_string()) {
        value = parse_label_token(lab.get<std::string>());
      }
      if (!value) throw DataError(at_line(path, line) + "invalid label " + lab.dump());
      post.label = value;
    }
    try {
      add_post(out, seen, std::move(post));
    } catch (const DataError& e) {
      throw DataError(at_line(path, line) + e.what());
    }
  }
  return out;
}

PostCollection load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> fields;
  std::size_t line = 0;
  std::size_t next_line = 1;
  if (!read_csv_record(in, fields, line, next_line)) throw DataError(path.string() + ": empty CSV file");
  if (!fields.empty() && fields[0].rfind("\xEF\xBB\xBF", 0) == 0) fields[0].erase(0, 3);
  int id_col = -1, text_col = -1, label_col = -1;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i] == "id") id_col = static_cast<int>(i);
    if (fields[i] == "text") text_col = static_cast<int>(i);
    if (fields[i] == "label") label_col = static_cast<int>(i);
  }
  if (id_col < 0 || text_col < 0) throw DataError(at_line(path, 1) + "header needs id and text columns");
  const std::size_t width = fields.size();
  PostCollection out;
  std::set<std::string> seen;
  while (true) {
    try {
      if (!read_csv_record(in, fields, line, next_line)) break;
    } catch (const DataError& e) {
      throw DataError(at_line(path, line) + e.what());
    }
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != width)
      throw DataError(at_line(path, line) + "expected " + std::to_string(width) + " fields, got " +
                      std::to_string(fields.size()));
    Post post;
    post.id = fields[id_col];
    if (post.id.empty()) throw DataError(at_line(path, line) + "empty id");
    post.raw_text = fields[text_col];
    if (label_col >= 0 && !fields[label_col].empty()) {
      post.label = parse_label_token(fields[label_col]);
      if (!post.label) throw DataError(at_line(path, line) + "invalid label \"" + fields[label_col] + "\"");
    }
    try {
      add_post(out, seen, std::move(post));
    } catch (const DataError& e) {
      throw DataError(at_line(path, line) + e.what());
    }
  }
  return out;
}

}  // namespace

bool read_csv_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line,
                     std::size_t& next_line) {
  fields.clear();
  line = next_line;
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char ch;
  while (in.get(ch)) {
    any = true;
    if (in_quotes) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++next_line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"') {
      in_quotes = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r') {
      if (in.peek() == '\n') continue;
    } else if (ch == '\n') {
      ++next_line;
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

std::optional<int> parse_label_token(std::string_view token) {
  if (token == "0" || token == "false") return 0;
  if (token == "1" || token == "true") return 1;
  return std::nullopt;
}

Format format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? Format::csv : Format::jsonl;
}

PostCollection load_posts(const std::filesystem::path& path, Format format) {
  return format == Format::csv ? load_csv(path) : load_jsonl(path);
}

void save_posts_jsonl(const PostCollection& posts, const std::filesystem::path& path, bool use_clean) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& p : posts) {
    json row;
    row["id"] = p.id;
    row["text"] = use_clean ? p.clean_text : p.raw_text;
    if (p.label) row["label"] = *p.label;
    out << row.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

}  // namespace anxpipe::corpus
