#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "kgqagen/kg_store.hpp"

namespace kgqagen::test {

// The ten worked-example triples used across the suite: a Nobel-nominee
// chain, the Karakalpakstan region and an astronomy journal.
inline const char* kFixtureTsv =
    "Johann Martin Schleyer\tQ12712\tnominated for\tP1411\tNobel Peace Prize\tQ35637\n"
    "International Volapük Academy\tQ3358168\tfounded by\tP112\tJohann Martin Schleyer\tQ12712\n"
    "Johann Martin Schleyer\tQ12712\tplace of birth\tP19\tOberlauda\tQ885402\n"
    "Karakalpakstan\tQ484245\tcapital\tP36\tNukus\tQ489898\n"
    "Karakalpakstan\tQ484245\tshares border with\tP47\tMangystau Region\tQ238931\n"
    "Karakalpakstan\tQ484245\tofficial language\tP37\tKarakalpak\tQ33541\n"
    "Karakalpakstan\tQ484245\tcountry\tP17\tUzbekistan\tQ265\n"
    "Astronomy and Astrophysics\tQ752075\tpublisher\tP123\tEDP Sciences\tQ114404\n"
    "Astronomy and Astrophysics\tQ752075\teditor\tP98\tThierry Forveille\tQ46260676\n"
    "Zeitschrift für Astrophysik\tQ3575110\tfollowed by\tP156\tAstronomy and Astrophysics\tQ752075\n";

inline TripleStore fixture_store() { return parse_tsv(kFixtureTsv, "fixture"); }

// Scripted generator replies matching the documented output contract.
inline const char* kExample1Output = R"json({
  "sufficient": true,
  "question": "Who among the nominees for the Nobel Peace Prize was also the founder of International Volapük Academy?",
  "answer": ["Johann Martin Schleyer (Q12712)"],
  "proof": [
    ["Johann Martin Schleyer (Q12712)", "nominated for (P1411)", "Nobel Peace Prize (Q35637)"],
    ["International Volapük Academy (Q3358168)", "founded by (P112)", "Johann Martin Schleyer (Q12712)"]
  ]
})json";

inline const char* kExample2Output = R"json({
  "sufficient": false,
  "candidate": ["Q33541", "Q489898", "Q238931"]
})json";

inline const char* kExample3Output = R"json({
  "sufficient": true,
  "question": "What astronomical journal, published by EDP Sciences and edited by Thierry Forveille, succeeded Zeitschrift für Astrophysik as its immediate follower?",
  "answer": ["Astronomy and Astrophysics (Q752075)"],
  "proof": [
    ["Astronomy and Astrophysics (Q752075)", "publisher (P123)", "EDP Sciences (Q114404)"],
    ["Astronomy and Astrophysics (Q752075)", "editor (P98)", "Thierry Forveille (Q46260676)"],
    ["Zeitschrift für Astrophysik (Q3575110)", "followed by (P156)", "Astronomy and Astrophysics (Q752075)"]
  ]
})json";

// Fresh scratch directory per test; removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("kgqagen_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    const std::string p = file(name);
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace kgqagen::test
