#include "cli.hpp"
#include "specs.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace affc;
using affc::cli::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / ("affc_test_" + name);
  std::ofstream(path) << contents;
  return path.string();
}

}  // namespace

TEST_CASE("arclength of the unit parabola over [0, 5]") {
  const auto f = temp_file("parabola.json", R"({"type":"parabola","domain":["0","5"]})");
  const auto r = run({"arclength", "--curve", f});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["command"] == "arclength");
  CHECK(doc["value"].get<double>() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("graph input reports its own affine arc length") {
  const auto f = temp_file("graph.json", R"({"type":"graph","polynomial":["0","0","0.5"],"x_domain":["0","2"]})");
  const auto r = run({"arclength", "--curve", f});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("exported extremal instances are counted as sharp") {
  struct Case {
    std::vector<std::string> example;
    int bound;
  };
  for (const auto& c : {Case{{"--kind", "parabola", "--m0", "2"}, 6},
                        Case{{"--kind", "hyperbola", "--m0", "2", "--rigid"}, 5},
                        Case{{"--kind", "parabola", "--m0", "1", "--rigid"}, 3}}) {
    std::vector<std::string> args{"examples"};
    args.insert(args.end(), c.example.begin(), c.example.end());
    const auto ex = run(args);
    REQUIRE(ex.code == 0);
    const auto f = temp_file("instance.json", ex.out);
    const auto r = run({"count", "--curve", f});
    CAPTURE(r.err);
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["certificate"]["bound"] == c.bound);
    CHECK(doc["count"] == c.bound);
    CHECK(doc["marker"] == "SHARP");
    CHECK(r.err.find("SHARP") != std::string::npos);
    const json expected = json::parse(ex.out)["expected_points"];
    REQUIRE(doc["points"].size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CHECK(doc["points"][i]["m"] == expected[i][0]);
      CHECK(doc["points"][i]["n"] == expected[i][1]);
    }
  }
}

TEST_CASE("a bound below the count exits with the violation code") {
  const auto ex = run({"examples", "--kind", "parabola", "--m0", "2"});
  const auto f = temp_file("instance_v.json", ex.out);
  // A claimed multiplier of 3 makes the bound smaller than the true count.
  const auto r = run({"count", "--curve", f, "--mdot", "3", "--theorem", "sharp_lat"});
  CHECK(r.code == cli::violated);
}

TEST_CASE("count with a window keeps only the points inside it") {
  const auto ex = run({"examples", "--kind", "parabola", "--m0", "2"});
  const auto f = temp_file("instance_w.json", ex.out);
  const auto r = run({"count", "--curve", f, "--ymax", "3", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "m,n,x,y,s\n0,0,0,0,0\n1,0,1,0,1\n2,1,2,1,2.0000000000000004\n3,3,3,3,3.0000000000000004\n");
}

TEST_CASE("parse errors exit with code 2") {
  CHECK(run({"arclength", "--curve", temp_file("bad.json", "{bad")}).code == cli::parse);
  CHECK(run({"arclength", "--curve", "/nonexistent/curve.json"}).code == cli::parse);
  CHECK(run({"arclength", "--curve", temp_file("type.json", R"({"type":"spiral"})")}).code == cli::parse);
  CHECK(run({"arclength", "--curve", temp_file("num.json", R"({"type":"parabola","domain":["0","x"]})")}).code ==
        cli::parse);
  CHECK(run({"figures", "fig9"}).code == cli::parse);
  CHECK(run({"bounds", "--theorem", "nope", "--k0", "0", "--Lambda", "1"}).code == cli::parse);
  CHECK(run({"frobnicate"}).code == cli::parse);
  CHECK(run({"verify", "thm9.9"}).code == cli::parse);
}

TEST_CASE("domain errors exit with code 3") {
  // A point not on the conic.
  const auto f = temp_file(
      "offconic.json",
      R"({"type":"conic","coefficients":{"a":"1","c":"1","f":"-1"},"point":["2","0"],"domain":["0","1"]})");
  CHECK(run({"arclength", "--curve", f}).code == cli::domain);
  // y = x³ has an inflection at 0.
  const auto g = temp_file("inflect.json", R"({"type":"graph","polynomial":["0","0","0","1"],"x_domain":["-1","1"]})");
  CHECK(run({"arclength", "--curve", g}).code == cli::domain);
}

TEST_CASE("ode comparison outside the positivity range reports failed hypotheses") {
  const auto r = run({"verify", "ode-comparison", "--k0", "0", "--k1", "4", "--L", "2"});
  CHECK(r.code == cli::hypotheses);
  const json doc = json::parse(r.out);
  CHECK(doc["reports"][0]["verdict"] == "hypotheses_failed");
  // Within the range the same comparison holds.
  CHECK(run({"verify", "thm3.4", "--k0", "0", "--k1", "2", "--L", "1"}).code == 0);
}

TEST_CASE("sweeps hold and are deterministic in the seed") {
  for (const std::string id : {"area-comparison", "area-sandwich", "rectangle", "triangle-arc", "triangle-rectangle"}) {
    CAPTURE(id);
    const auto a = run({"--seed", "7", "verify", id, "--trials", "10"});
    const auto b = run({"--seed", "7", "verify", id, "--trials", "10"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["seed"] == 7);
  }
}

TEST_CASE("bounds command") {
  const auto r = run({"bounds", "--theorem", "sharp_lat", "--k0", "0", "--Lambda", "5"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["certificate"]["bound"] == 6);
  CHECK(doc["certificate"]["intermediate"]["m"] == 2);
  // The alias resolves to the same certificate.
  CHECK(run({"bounds", "--theorem", "thm6.13", "--k0", "0", "--Lambda", "5"}).out == r.out);
  // A large positive k0 leaves the two-point bound undefined.
  CHECK(run({"bounds", "--theorem", "2pts1", "--k0", "5", "--Lambda", "5"}).code == cli::hypotheses);
}

TEST_CASE("kernel matches its closed form and is positive for k below the first eigenvalue") {
  const auto r = run({"kernel", "--n", "3", "--k", "-1", "--to", "2"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["max_closed_form_difference"].get<double>() < 1e-8);
  CHECK(doc["positivity"]["verdict"] == "certified_positive_on_grid");
  const auto bad = run({"kernel", "--n", "2", "--k", "4", "--to", "2"});
  REQUIRE(bad.code == 0);
  CHECK(json::parse(bad.out)["positivity"]["verdict"] == "violation");
}

TEST_CASE("figures produce series,index,x,y rows") {
  for (const std::string id : {"fig1", "fig5", "fig6", "fig7", "fig8"}) {
    CAPTURE(id);
    const auto r = run({"figures", id, "--format", "csv", "--samples", "20"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("series,index,x,y\n", 0) == 0);
  }
}

TEST_CASE("examples without a kind verifies every instance") {
  const auto r = run({"examples"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["instances"].size() == 9);
  for (const auto& inst : doc["instances"]) CHECK(inst["sharp"] == true);
  CHECK(doc["circle"]["configurations"][0]["trace"] == 0);
  CHECK(doc["circle"]["configurations"][1]["trace"] == 1);
}

TEST_CASE("--out writes the document to a file") {
  const auto path = (std::filesystem::temp_directory_path() / "affc_test_out.json").string();
  const auto f = temp_file("parabola_o.json", R"({"type":"parabola","domain":["0","1"]})");
  const auto r = run({"--out", path, "arclength", "--curve", f});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(json::parse(in)["value"].get<double>() == doctest::Approx(1.0));
}
