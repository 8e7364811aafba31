#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "lemma/dataset.hpp"
#include "lemma/serialize.hpp"
#include "support.hpp"

using namespace lemma;
using testing::TempDir;

namespace {

int run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " LEMMA_CLI_PATH " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes") {
  TempDir dir("cli");
  const std::string out = dir.str("gen");
  CHECK(run("gen --task pass --count 3 --seed 5 --out " + out) == 0);
  CHECK(run("demo --instances " + out + "/instances.jsonl --out " + dir.str("data") + " --rasters none") == 0);
  CHECK(run("alloc --instance " + out + "/instances.jsonl --id pass_0001") == 0);
  CHECK(run("render --episode " + dir.str("data") + "/pass/episodes.jsonl --step 1 --out " + dir.str("s.svg")) == 0);
  CHECK(read_file(dir.str("s.svg")).rfind("<svg", 0) == 0);

  CHECK(run("") == 2);
  CHECK(run("gen --count -1 --out " + out) == 2);
  CHECK(run("gen --task juggle --out " + out) == 2);
  CHECK(run("alloc --instance " + out + "/instances.jsonl --id nope") == 2);
  CHECK(run("render --episode " + dir.str("data") + "/pass/episodes.jsonl --step 9 --out " + dir.str("x.svg")) == 2);
  CHECK(run("eval --data " + dir.str("data") + " --policy telepathy") == 2);
  CHECK(run("gen --count 1 --out " + out, "LEMMA_SEED=banana") == 2);

  CHECK(run("demo --instances " + dir.str("missing.jsonl") + " --out " + dir.str("d2")) == 3);
  write_file(dir.str("bad.jsonl"), "{\"id\": \n");
  CHECK(run("alloc --instance " + dir.str("bad.jsonl")) == 3);
}

TEST_CASE("LEMMA_SEED overrides the seed flag") {
  TempDir dir("cli_seed");
  REQUIRE(run("gen --task stack --count 2 --seed 1 --out " + dir.str("a"), "LEMMA_SEED=99") == 0);
  REQUIRE(run("gen --task stack --count 2 --seed 99 --out " + dir.str("b")) == 0);
  REQUIRE(run("gen --task stack --count 2 --seed 1 --out " + dir.str("c")) == 0);
  CHECK(read_file(dir.str("a/instances.jsonl")) == read_file(dir.str("b/instances.jsonl")));
  CHECK(read_file(dir.str("a/instances.jsonl")) != read_file(dir.str("c/instances.jsonl")));
  CHECK(Json::parse(read_file(dir.str("a/gen.meta"))).at("master_seed") == 99);
}
