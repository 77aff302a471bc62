#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>
#include <sys/wait.h>

#include "test_support.hpp"

namespace fs = std::filesystem;
using castsize::testing::read_text;

namespace {

const fs::path kMini = fs::path(CASTSIZE_FIXTURES) / "mini";

struct Result {
  int code;
  std::string output;
};

std::string quote(const std::string &s) {
  std::string out = "'";
  for (char c : s)
    out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("castsize-cli-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path &path() const { return path_; }

private:
  fs::path path_;
};

// Runs the CLI with stdout and stderr captured to a file.
Result cli(const std::string &args, const TempDir &tmp, const std::string &env = "") {
  const fs::path out = tmp.path() / "cli-output.txt";
  const std::string cmd = env + " " + quote(CASTSIZE_CLI) + " " + args + " > " +
                          quote(out.string()) + " 2>&1";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(out.string())};
}

std::string mini_flags() {
  return "--data-dir " + quote(kMini.string()) + " --aliases " +
         quote((kMini / "aliases.csv").string()) + " --metadata " +
         quote((kMini / "metadata.json").string());
}

} // namespace

TEST_CASE("report writes every output") {
  TempDir tmp;
  auto r = cli("report " + mini_flags() + " -o " + quote((tmp.path() / "out").string()), tmp);
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path() / "out" / "metrics.csv"));
  CHECK(fs::exists(tmp.path() / "out" / "dendrogram.nwk"));
  CHECK(fs::exists(tmp.path() / "out" / "regression.csv"));
}

TEST_CASE("stage subcommands write only their stage") {
  TempDir tmp;
  auto r = cli("metrics " + mini_flags() + " -o " + quote((tmp.path() / "m").string()), tmp);
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path() / "m" / "metrics.csv"));
  CHECK_FALSE(fs::exists(tmp.path() / "m" / "distance_matrix.csv"));

  r = cli("mds " + mini_flags() + " -o " + quote((tmp.path() / "d").string()), tmp);
  CHECK(r.code == 0);
  CHECK(fs::exists(tmp.path() / "d" / "mds.csv"));
  CHECK_FALSE(fs::exists(tmp.path() / "d" / "metrics.csv"));
}

TEST_CASE("validate reports the dataset") {
  TempDir tmp;
  auto r = cli("validate " + mini_flags(), tmp);
  CHECK(r.code == 0);
  CHECK(r.output.find("2 movies, no errors") != std::string::npos);
}

TEST_CASE("flags override the config file") {
  TempDir tmp;
  std::ofstream(tmp.path() / "run.cfg") << "data_dir = " << kMini.string() << "\n"
                                        << "metadata_file = " << (kMini / "metadata.json").string()
                                        << "\n"
                                        << "output_dir = out\n"
                                        << "clusters_k = 1\n";
  auto r = cli("cluster -c " + quote((tmp.path() / "run.cfg").string()) + " --clusters 2", tmp);
  REQUIRE(r.code == 0);
  // output_dir in the file is relative to the file
  const std::string clusters = read_text((tmp.path() / "out" / "clusters.csv").string());
  CHECK(clusters == "movie,cluster\nalpha,0\nbeta,1\n");
}

TEST_CASE("exit codes") {
  TempDir tmp;
  SUBCASE("missing alias file is a config error") {
    auto r = cli("report --data-dir " + quote(kMini.string()) + " --metadata " +
                     quote((kMini / "metadata.json").string()) + " --aliases " +
                     quote((tmp.path() / "none.csv").string()),
                 tmp);
    CHECK(r.code == 2);
    CHECK(r.output.find("alias_file") != std::string::npos);
  }
  SUBCASE("bad option value") {
    CHECK(cli("report " + mini_flags() + " --linkage ward", tmp).code == 2);
    CHECK(cli("report " + mini_flags() + " --measure s_eff_bar", tmp).code == 2);
    CHECK(cli("report -c " + quote((tmp.path() / "missing.cfg").string()), tmp).code == 2);
  }
  SUBCASE("data error") {
    fs::create_directories(tmp.path() / "data" / "conflicts");
    std::ofstream(tmp.path() / "data" / "conflicts" / "x.csv")
        << "movie,timestamp,side_a,side_b,outcome\nalpha,zz,A,B,A\n";
    auto r = cli("validate --data-dir " + quote((tmp.path() / "data").string()) +
                     " --metadata " + quote((kMini / "metadata.json").string()),
                 tmp);
    CHECK(r.code == 1);
    CHECK(r.output.find("BadTimestamp") != std::string::npos);
  }
  SUBCASE("malformed metadata") {
    std::ofstream(tmp.path() / "meta.json") << "[{\"title\": 3}]";
    auto r = cli("report --data-dir " + quote(kMini.string()) + " --metadata " +
                     quote((tmp.path() / "meta.json").string()),
                 tmp);
    CHECK(r.code == 1);
  }
  SUBCASE("fetch without an API key") {
    auto r = cli("fetch-meta 'Iron Man'", tmp, "env -u CASTSIZE_OMDB_API_KEY");
    CHECK(r.code == 2);
    CHECK(r.output.find("CASTSIZE_OMDB_API_KEY") != std::string::npos);
  }
}

TEST_CASE("fetch-meta against a local service") {
  httplib::Server server;
  server.Get("/", [](const httplib::Request &req, httplib::Response &res) {
    if (req.get_param_value("apikey") != "k" || req.get_param_value("t") != "Iron Man") {
      res.status = 404;
      return;
    }
    res.set_content(R"({"Title":"Iron Man","Released":"02 May 2008","Runtime":"126 min",)"
                    R"("imdbRating":"7.9","BoxOffice":"N/A","Response":"True"})",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TempDir tmp;
  const std::string base = " --base-url http://127.0.0.1:" + std::to_string(port);
  const fs::path out = tmp.path() / "record.json";
  auto ok = cli("fetch-meta 'Iron Man'" + base + " -o " + quote(out.string()), tmp,
                "CASTSIZE_OMDB_API_KEY=k");
  CHECK(ok.code == 0);
  auto doc = nlohmann::json::parse(read_text(out.string()));
  CHECK(doc["title"] == "Iron Man");
  CHECK(doc["box_office_musd"].is_null());
  CHECK(doc["runtime_min"] == 126);

  auto missing = cli("fetch-meta 'Nobody'" + base, tmp, "CASTSIZE_OMDB_API_KEY=k");
  CHECK(missing.code == 3);

  server.stop();
  listener.join();
}
