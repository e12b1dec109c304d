#include <doctest.h>

#include <fstream>

#include "wextract/manifest.hpp"
#include "wextract/money.hpp"

using namespace wextract;

namespace {

std::filesystem::path fixtures() { return WEXTRACT_FIXTURES_DIR; }

const CorpusEntryResult* entry_for(const CorpusReport& report,
                                   const std::string& needle) {
  for (const CorpusEntryResult& e : report.entries)
    if (e.url.find(needle) != std::string::npos) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("manifest loads, validates and resolves") {
  CorpusManifest manifest = CorpusManifest::load(fixtures() / "manifest.json");
  CHECK(manifest.entries.size() == 12);
  CHECK(manifest.entries[0].url.host == "www.zingermans.com");
  CHECK(manifest.entries[0].expected_minor == 12500);
  CHECK(std::filesystem::exists(manifest.resolve(manifest.entries[0])));

  SUBCASE("missing files and duplicate urls are fatal") {
    auto dir = std::filesystem::temp_directory_path() / "wextract-manifest-test";
    std::filesystem::create_directories(dir);
    {
      std::ofstream out(dir / "bad.json");
      out << "{\"entries\":[{\"url\":\"https://a.example/\",\"local_path\":"
             "\"missing.html\"}]}";
    }
    CHECK_THROWS_AS(CorpusManifest::load(dir / "bad.json"), std::runtime_error);
    {
      std::ofstream page(dir / "p.html");
      page << "<p>$ 1</p>";
      std::ofstream out(dir / "dup.json");
      out << "{\"entries\":["
             "{\"url\":\"https://a.example/\",\"local_path\":\"p.html\"},"
             "{\"url\":\"https://a.example/\",\"local_path\":\"p.html\"}]}";
    }
    CHECK_THROWS_AS(CorpusManifest::load(dir / "dup.json"), std::runtime_error);
  }
}

TEST_CASE("the bundled corpus scores as designed") {
  CorpusManifest manifest = CorpusManifest::load(fixtures() / "manifest.json");
  auto rules = load_rules(fixtures() / "rules.txt");
  auto clues = load_clues(fixtures() / "clues.txt");
  CorpusReport report = run_corpus(manifest, clues, rules);

  CHECK(report.exact == 10);
  CHECK(report.miss == 0);
  CHECK(report.unscored == 2);
  CHECK(report.ambiguous == 1);

  const CorpusEntryResult* zingerman = entry_for(report, "zingermans");
  REQUIRE(zingerman);
  CHECK(zingerman->found);
  CHECK(zingerman->amount_minor == 12500);
  CHECK(zingerman->currency == "USD");
  CHECK(zingerman->fragment_count == 149);

  const CorpusEntryResult* ambiguous = entry_for(report, "atticfinds.example/box");
  REQUIRE(ambiguous);
  CHECK(!ambiguous->found);
  CHECK(ambiguous->candidate_count == 2);

  const CorpusEntryResult* zero = entry_for(report, "gift-cards");
  REQUIRE(zero);
  CHECK(!zero->found);
  CHECK(zero->candidate_count == 0);

  const CorpusEntryResult* recovered = entry_for(report, "pantry-bundle");
  REQUIRE(recovered);
  CHECK(recovered->found);
  CHECK(recovered->recover_ran);
  CHECK(recovered->amount_minor == 3450);

  const CorpusEntryResult* split = entry_for(report, "werkhaus");
  REQUIRE(split);
  CHECK(split->amount_minor == 110415);
  CHECK(split->currency == "EUR");
}

TEST_CASE("parallel corpus runs match the serial report") {
  CorpusManifest manifest = CorpusManifest::load(fixtures() / "manifest.json");
  auto rules = load_rules(fixtures() / "rules.txt");
  auto clues = load_clues(fixtures() / "clues.txt");
  CorpusReport serial = run_corpus(manifest, clues, rules, {}, 1);
  CorpusReport parallel = run_corpus(manifest, clues, rules, {}, 4);
  CHECK(report_to_json(serial) == report_to_json(parallel));
}

TEST_CASE("empty manifest yields a zero-count report") {
  auto dir = std::filesystem::temp_directory_path() / "wextract-empty-manifest";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "empty.json");
    out << "{\"entries\":[]}";
  }
  CorpusManifest manifest = CorpusManifest::load(dir / "empty.json");
  CorpusReport report = run_corpus(manifest, default_clues(), {});
  CHECK(report.entries.empty());
  CHECK(report.exact == 0);
  CHECK(report.miss == 0);
  CHECK(report.unscored == 0);
}
