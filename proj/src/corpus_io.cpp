#include "pausecws/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "pausecws/error.hpp"

namespace pausecws {

namespace {

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    try {
      fn(line);
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  return out;
}

template <typename T, typename Reader>
std::vector<T> read_file(const std::string& path, Reader reader) {
  auto in = open_in(path);
  try {
    return reader(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.detail());
  }
}

}  // namespace

std::vector<SegmentedSentence> read_gold(std::istream& in) {
  std::vector<SegmentedSentence> out;
  for_each_line(in, [&](const std::string& line) { out.push_back(SegmentedSentence::from_line(line)); });
  return out;
}

std::vector<Chars> read_raw(std::istream& in) {
  std::vector<Chars> out;
  for_each_line(in, [&](const std::string& line) {
    Chars chars = split_utf8(line);
    std::erase_if(chars, [](const std::string& c) { return c == " " || c == "\t"; });
    out.push_back(std::move(chars));
  });
  return out;
}

std::vector<PartialSentence> read_partial(std::istream& in) {
  std::vector<PartialSentence> out;
  for_each_line(in, [&](const std::string& line) { out.push_back(parse_partial_line(line)); });
  return out;
}

std::vector<MinedSentence> read_mined(std::istream& in) {
  std::vector<MinedSentence> out;
  for_each_line(in, [&](const std::string& line) { out.push_back(mined_from_json_line(line)); });
  return out;
}

void write_gold(std::ostream& out, const std::vector<SegmentedSentence>& corpus) {
  for (const auto& s : corpus) out << s.to_line() << '\n';
}

void write_partial(std::ostream& out, const std::vector<PartialSentence>& corpus) {
  for (const auto& p : corpus) out << format_partial_line(p) << '\n';
}

void write_mined(std::ostream& out, const std::vector<MinedSentence>& corpus) {
  for (const auto& m : corpus) out << mined_to_json_line(m) << '\n';
}

std::vector<SegmentedSentence> read_gold_file(const std::string& path) {
  return read_file<SegmentedSentence>(path, [](std::istream& in) { return read_gold(in); });
}

std::vector<Chars> read_raw_file(const std::string& path) {
  return read_file<Chars>(path, [](std::istream& in) { return read_raw(in); });
}

std::vector<PartialSentence> read_partial_file(const std::string& path) {
  return read_file<PartialSentence>(path, [](std::istream& in) { return read_partial(in); });
}

std::vector<MinedSentence> read_mined_file(const std::string& path) {
  return read_file<MinedSentence>(path, [](std::istream& in) { return read_mined(in); });
}

void write_gold_file(const std::string& path, const std::vector<SegmentedSentence>& corpus) {
  auto out = open_out(path);
  write_gold(out, corpus);
}

void write_partial_file(const std::string& path, const std::vector<PartialSentence>& corpus) {
  auto out = open_out(path);
  write_partial(out, corpus);
}

void write_mined_file(const std::string& path, const std::vector<MinedSentence>& corpus) {
  auto out = open_out(path);
  write_mined(out, corpus);
}

std::string read_text_file(const std::string& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pausecws
