#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "doctest.h"
#include "pausecws/corpus_io.hpp"
#include "pausecws/eval.hpp"
#include "pausecws/model.hpp"
#include "pausecws/utf8.hpp"

namespace fs = std::filesystem;
using namespace pausecws;

namespace {

class Workdir {
 public:
  Workdir() : dir_(fs::temp_directory_path() / ("pausecws_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workdir() { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream out(path(name), std::ios::binary);
    out << text;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(path(name), std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  // Exit status of the tool; stdout and stderr go to <dir>/out.log.
  int run(const std::string& args) const {
    const std::string cmd =
        std::string("cd \"") + dir_.string() + "\" && \"" + PAUSECWS_CLI_PATH + "\" " + args + " > out.log 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

 private:
  fs::path dir_;
};

constexpr const char* kGold = "有人 在 细细地 倾听\n我 在 这里\n他们 细细地 听\n有人 在 这里\n";

constexpr const char* kAlignment =
    R"({"utterance_id":"u1","frame_offset_ms":10,"chars":[)"
    R"({"c":"有","b":0,"e":2},{"c":"人","b":2,"e":5},{"c":"在","b":28,"e":31},{"c":"细","b":31,"e":33},)"
    R"({"c":"细","b":33,"e":35},{"c":"地","b":35,"e":37},{"c":"倾","b":48,"e":50},{"c":"听","b":50,"e":52}]})"
    "\n";

}  // namespace

TEST_CASE("train, mine, filter and segment the listening sentence") {
  Workdir w;
  w.write("gold.txt", kGold);
  w.write("raw.txt", "有人在细细地倾听\n");
  w.write("align.json", kAlignment);
  REQUIRE(w.run("--epochs 30 train --gold gold.txt --model-out m.txt") == 0);
  CHECK(fs::exists(w.path("m.txt.manifest.json")));

  REQUIRE(w.run("segment --model m.txt --input raw.txt --out seg.txt") == 0);
  CHECK(w.read("seg.txt") == "有人 在 细细地 倾听\n");

  REQUIRE(w.run("mine --model m.txt --alignments align.json --out mined.jsonl") == 0);
  const auto mined = read_mined_file(w.path("mined.jsonl"));
  REQUIRE(mined.size() == 1);
  REQUIRE(mined[0].pauses.size() == 2);
  CHECK(mined[0].pauses[0].junction == 1);
  CHECK(mined[0].pauses[0].duration_ms == 230.0);
  CHECK(mined[0].pauses[1].junction == 5);
  CHECK(mined[0].pauses[1].duration_ms == 110.0);

  REQUIRE(w.run("--threshold 0.5 filter --mined mined.jsonl --out partial.txt") == 0);
  CHECK(w.read("partial.txt") == "有人|在细细地|倾听\n");

  REQUIRE(w.run("complete --model m.txt --partial partial.txt --out done.txt") == 0);
  CHECK(w.read("done.txt") == "有人 在 细细地 倾听\n");

  REQUIRE(w.run("stats --mined mined.jsonl --out stats.tsv") == 0);
  CHECK(w.read("stats.tsv").find("total\t2") != std::string::npos);
}

TEST_CASE("higher thresholds keep fewer boundaries") {
  Workdir w;
  w.write("gold.txt", kGold);
  w.write("align.json", kAlignment);
  REQUIRE(w.run("--epochs 2 train --gold gold.txt --model-out m.txt") == 0);
  REQUIRE(w.run("mine --model m.txt --alignments align.json --out mined.jsonl") == 0);
  std::size_t previous = std::string::npos;
  for (const char* t : {"0.1", "0.5", "0.9"}) {
    REQUIRE(w.run(std::string("--threshold ") + t + " filter --mined mined.jsonl --out p.txt") == 0);
    const auto p = read_partial_file(w.path("p.txt"));
    REQUIRE(p.size() == 1);
    CHECK(p[0].boundaries.size() <= previous);
    previous = p[0].boundaries.size();
  }
}

TEST_CASE("ctt with an empty target reproduces train") {
  Workdir w;
  w.write("gold.txt", kGold);
  w.write("empty.txt", "");
  REQUIRE(w.run("--deterministic --epochs 5 train --gold gold.txt --model-out a.txt") == 0);
  REQUIRE(w.run("--deterministic --epochs 5 ctt --source gold.txt --target empty.txt --model-out b.txt") == 0);
  CHECK(w.read("a.txt") == w.read("b.txt"));
}

TEST_CASE("a manifest replays its run and flags override it") {
  Workdir w;
  w.write("gold.txt", kGold);
  REQUIRE(w.run("--epochs 4 train --gold gold.txt --model-out m.txt") == 0);
  const std::string first = w.read("m.txt");
  REQUIRE(w.run("--config m.txt.manifest.json") == 0);
  CHECK(w.read("m.txt") == first);
  REQUIRE(w.run("--config m.txt.manifest.json --epochs 1") == 0);
  CHECK(w.read("m.txt") != first);
}

TEST_CASE("exit codes") {
  Workdir w;
  w.write("gold.txt", kGold);
  w.write("bad.txt", "not a model\n");
  w.write("raw.txt", "ab\n");
  CHECK(w.run("--help") == 0);
  CHECK(w.run("") == 2);
  CHECK(w.run("--threshold 1.5 train --gold gold.txt --model-out m.txt") == 2);
  CHECK(w.run("train --gold missing.txt --model-out m.txt") == 2);
  CHECK(w.run("segment --model bad.txt --input raw.txt") == 1);
  CHECK(w.read("out.log").find("ParseError") != std::string::npos);
}

TEST_CASE("eval and disagree reports") {
  Workdir w;
  w.write("gold.txt", "有人 在 倾听\n我 在\n");
  w.write("pred.txt", "有 人 在 倾听\n我 在\n");
  REQUIRE(w.run("eval --gold gold.txt --pred pred.txt --out report.tsv") == 0);
  const std::string report = w.read("report.tsv");
  CHECK(report.find("precision\t0.666667") != std::string::npos);
  CHECK(report.find("recall\t0.800000") != std::string::npos);
  REQUIRE(w.run("disagree --pred-a gold.txt --pred-b pred.txt --out review.tsv") == 0);
  const std::string review = w.read("review.tsv");
  CHECK(review.find("有人") != std::string::npos);
  CHECK(review.find("我 在") == std::string::npos);
}
