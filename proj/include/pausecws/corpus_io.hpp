#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pausecws/mining.hpp"
#include "pausecws/segmentation.hpp"

namespace pausecws {

// All corpora are UTF-8, one sentence per line; blank lines are skipped.
std::vector<SegmentedSentence> read_gold(std::istream& in);
std::vector<Chars> read_raw(std::istream& in);
std::vector<PartialSentence> read_partial(std::istream& in);
std::vector<MinedSentence> read_mined(std::istream& in);

void write_gold(std::ostream& out, const std::vector<SegmentedSentence>& corpus);
void write_partial(std::ostream& out, const std::vector<PartialSentence>& corpus);
void write_mined(std::ostream& out, const std::vector<MinedSentence>& corpus);

std::vector<SegmentedSentence> read_gold_file(const std::string& path);
std::vector<Chars> read_raw_file(const std::string& path);
std::vector<PartialSentence> read_partial_file(const std::string& path);
std::vector<MinedSentence> read_mined_file(const std::string& path);

void write_gold_file(const std::string& path, const std::vector<SegmentedSentence>& corpus);
void write_partial_file(const std::string& path, const std::vector<PartialSentence>& corpus);
void write_mined_file(const std::string& path, const std::vector<MinedSentence>& corpus);

std::string read_text_file(const std::string& path);  // throws Error(IoError)

}  // namespace pausecws
