#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "relequil/cli.hpp"
#include "relequil/io.hpp"
#include "support.hpp"

namespace relequil::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("relequil_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                         "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  fs::path path_;
};

const char* kCounterexample = R"({"rows": 6, "cols": 6, "field": "rational", "data": [
  ["-2", 0, 0, 0, 0, 0], [0, "-1", 0, 0, 0, 0], [0, 0, "1", 0, 0, 0],
  [0, 0, 0, "-1", 0, 0], [0, 0, 0, 0, "0", 0], [0, 0, 0, 0, 0, "0"]]})";

RunConfig config(const std::string& sub, std::vector<std::string> inputs, Backend backend = Backend::exact) {
  RunConfig c;
  c.subcommand = sub;
  c.inputs = std::move(inputs);
  c.backend = backend;
  c.seed = 7;
  return c;
}

// ----------------------------------------------------------------------- io

TEST(Io, RationalMatrixRoundTrip) {
  std::mt19937_64 rng(testing::seed() + 40);
  for (int k = 0; k < 20; ++k) {
    RatMatrix a = testing::random_symmetric(rng, 1 + static_cast<std::size_t>(k % 5));
    io::MatrixData back = io::parse_matrix(io::matrix_to_json(a));
    ASSERT_TRUE(back.exact);
    EXPECT_EQ(*back.exact, a);
  }
}

TEST(Io, FloatMatrixRoundTripThroughText) {
  numeric::MatrixXd a(2, 2);
  a << 0.1, 1.0 / 3.0, -2.5e-300, 1e300;
  Json j = Json::parse(io::dump_stable(io::matrix_to_json(a)));
  io::MatrixData back = io::parse_matrix(j);
  EXPECT_FALSE(back.exact);
  EXPECT_EQ(back.values, a);
}

TEST(Io, SubspaceRoundTripAndValidation) {
  RatSubspace w{3, RatMatrix(3, 2)};
  w.basis(0, 0) = make_rational(1, 2);
  w.basis(2, 1) = -3;
  RatSubspace back = io::parse_subspace(io::subspace_to_json(w));
  EXPECT_EQ(back.basis, w.basis);
  Json dependent = {{"ambient", 2}, {"basis", {{1, 2}, {2, 4}}}};
  EXPECT_THROW(io::parse_subspace(dependent), io::InputError);
}

TEST(Io, MalformedMatrices) {
  EXPECT_THROW(io::parse_matrix(Json{{"rows", 2}, {"cols", 2}, {"field", "rational"}}), io::InputError);
  EXPECT_THROW(io::parse_matrix(Json{{"rows", 1}, {"cols", 1}, {"field", "complex"}, {"data", {{1}}}}), io::InputError);
  EXPECT_THROW(io::parse_matrix(Json{{"rows", 1}, {"cols", 2}, {"field", "float64"}, {"data", {{1}}}}), io::InputError);
  EXPECT_THROW(io::parse_matrix(Json{{"rows", 1}, {"cols", 1}, {"field", "rational"}, {"data", {{0.5}}}}), io::InputError);
  EXPECT_THROW(io::parse_matrix(Json{{"rows", 1}, {"cols", 1}, {"field", "rational"}, {"data", {{"1/0"}}}}), io::InputError);
}

TEST(Io, DumpStableSortsKeysAndFormatsDoubles) {
  Json j = {{"b", 0.1}, {"a", {1, 2, 3}}, {"c", {{"z", true}, {"y", nullptr}}}};
  const std::string text = io::dump_stable(j);
  EXPECT_EQ(text,
            "{\n"
            "  \"a\": [1, 2, 3],\n"
            "  \"b\": 0.10000000000000001,\n"
            "  \"c\": {\n"
            "    \"y\": null,\n"
            "    \"z\": true\n"
            "  }\n"
            "}\n");
  EXPECT_EQ(io::dump_stable(Json::parse(text)), text);
}

TEST(Io, NonFiniteNumbersBecomeStrings) {
  EXPECT_EQ(io::number(std::nan("")), Json("nan"));
  EXPECT_EQ(io::number(-HUGE_VAL), Json("-inf"));
  EXPECT_EQ(io::number(1.5), Json(1.5));
}

TEST(Io, ProblemFile) {
  Json j = Json::parse(R"({"masses": [1, 2], "alpha": 1.5, "positions": [[0, 0], [1, "1/2"]],
                          "settings": {"cc_tol": 1e-9, "max_iter": 50}})");
  io::Problem p = io::parse_problem(j);
  EXPECT_EQ(p.system.n(), 2);
  EXPECT_EQ(p.system.positions(3), 0.5);
  EXPECT_EQ(p.settings.max_iter, 50);
  EXPECT_THROW(io::parse_problem(Json::parse(R"({"masses": [1], "alpha": 1, "positions": [[0, 0]]})")), io::InputError);
}

// ------------------------------------------------------------------ classify

TEST(Classify, CounterexampleReport) {
  TempDir dir;
  RunResult r = dispatch(config("classify", {dir.write("b.json", kCounterexample)}));
  ASSERT_EQ(r.exit_code, success) << r.diagnostic;
  Json j = Json::parse(r.report);
  EXPECT_EQ(j["classification"]["verdict"], "spectrally_stable_not_linear");
  EXPECT_EQ(j["inertia"]["morse_index"], 3);
  EXPECT_EQ(j["theorem"]["reason"], "odd_index");
  EXPECT_EQ(j["certificates"][0]["outcome"], "not_j_invariant");
}

TEST(Classify, IdentityIsLinearlyStable) {
  TempDir dir;
  const std::string f = dir.write("i.json", R"({"rows": 2, "cols": 2, "field": "rational", "data": [[1, 0], [0, 1]]})");
  RunResult r = dispatch(config("classify", {f}));
  EXPECT_EQ(r.exit_code, success);
  EXPECT_EQ(Json::parse(r.report)["classification"]["verdict"], "linearly_stable");
  RunResult fl = dispatch(config("classify", {f}, Backend::float64));
  EXPECT_EQ(Json::parse(fl.report)["classification"]["verdict"], "linearly_stable");
}

TEST(Classify, OddDimensionIsInputError) {
  TempDir dir;
  RunResult r = dispatch(config(
      "classify", {dir.write("o.json", R"({"rows": 3, "cols": 3, "field": "rational", "data": [[1,0,0],[0,1,0],[0,0,1]]})")}));
  EXPECT_EQ(r.exit_code, input_error);
  EXPECT_NE(r.diagnostic.find("even"), std::string::npos);
}

TEST(Classify, ExactBackendNeedsRationalInput) {
  TempDir dir;
  const std::string f = dir.write("f.json", R"({"rows": 2, "cols": 2, "field": "float64", "data": [[1, 0], [0, 1]]})");
  EXPECT_EQ(dispatch(config("classify", {f})).exit_code, input_error);
  EXPECT_EQ(dispatch(config("classify", {f}, Backend::float64)).exit_code, success);
}

TEST(Classify, MalformedJsonAndMissingFile) {
  TempDir dir;
  EXPECT_EQ(dispatch(config("classify", {dir.write("bad.json", "{not json")})).exit_code, input_error);
  EXPECT_EQ(dispatch(config("classify", {"/nonexistent/file.json"})).exit_code, input_error);
}

TEST(Classify, IndeterminateVerdictExitsTwo) {
  TempDir dir;
  // A tolerance so large that the off-axis pair of diag{1, -1} lands in the band.
  RunConfig c = config("classify", {dir.write("h.json", R"({"rows": 2, "cols": 2, "field": "float64", "data": [[1, 0], [0, -1]]})")},
                       Backend::float64);
  c.tol = 0.5;
  RunResult r = dispatch(c);
  EXPECT_EQ(r.exit_code, indeterminate);
  EXPECT_EQ(Json::parse(r.report)["classification"]["verdict"], "indeterminate");
}

TEST(Classify, OmegaFile) {
  TempDir dir;
  RunConfig c = config("classify", {dir.write("b.json", R"({"rows": 2, "cols": 2, "field": "rational", "data": [[1, 0], [0, 1]]})")});
  c.omega_path = dir.write("w.json", R"({"rows": 2, "cols": 2, "field": "rational", "data": [[0, -2], [2, 0]]})");
  RunResult r = dispatch(c);
  ASSERT_EQ(r.exit_code, success) << r.diagnostic;
  EXPECT_TRUE(Json::parse(r.report)["classification"]["reduced"].get<bool>());
}

// ---------------------------------------------------------------------- flow

TEST(Flow, KreinPathForIdentity) {
  TempDir dir;
  const std::string f = dir.write(
      "k.json", R"({"type": "krein", "B": {"rows": 2, "cols": 2, "field": "rational", "data": [[1, 0], [0, 1]]}, "s_max": 3})");
  RunResult r = dispatch(config("flow", {f}));
  ASSERT_EQ(r.exit_code, success) << r.diagnostic;
  Json j = Json::parse(r.report);
  ASSERT_EQ(j["crossings"].size(), 1u);
  EXPECT_EQ(j["crossings"][0]["exact_location"], "1");
  EXPECT_TRUE(j["kappa_identity"]["holds"].get<bool>());
  EXPECT_EQ(j["relative_morse_index"], -j["spectral_flow"].get<int>());
}

TEST(Flow, SMaxOverrideAndRequirement) {
  TempDir dir;
  const std::string f =
      dir.write("k.json", R"({"type": "krein", "B": {"rows": 2, "cols": 2, "field": "rational", "data": [[1, 0], [0, 1]]}})");
  EXPECT_EQ(dispatch(config("flow", {f})).exit_code, input_error);
  RunConfig c = config("flow", {f});
  c.s_max = "1/2";
  RunResult r = dispatch(c);
  ASSERT_EQ(r.exit_code, success);
  EXPECT_EQ(Json::parse(r.report)["crossings"].size(), 0u);
}

TEST(Flow, LinearPaths) {
  TempDir dir;
  const std::string f = dir.write("l.json", R"({"type": "linear",
      "A0": {"rows": 2, "cols": 2, "field": "rational", "data": [[-1, 0], [0, -1]]},
      "A1": {"rows": 2, "cols": 2, "field": "rational", "data": [[1, 0], [0, 1]]}})");
  for (Backend b : {Backend::exact, Backend::float64}) {
    RunResult r = dispatch(config("flow", {f}, b));
    ASSERT_EQ(r.exit_code, success) << r.diagnostic;
    EXPECT_EQ(Json::parse(r.report)["spectral_flow"], 2);
  }
  const std::string c = dir.write("c.json", R"({"type": "linear",
      "A0": {"rows": 1, "cols": 1, "field": "rational", "data": [[3]]},
      "A1": {"rows": 1, "cols": 1, "field": "rational", "data": [[3]]}})");
  EXPECT_EQ(Json::parse(dispatch(config("flow", {c})).report)["spectral_flow"], 0);
}

TEST(Flow, IrregularCrossingExitsThree) {
  TempDir dir;
  const std::string f = dir.write("t.json", R"({"type": "linear",
      "A0": {"rows": 2, "cols": 2, "field": "rational", "data": [[0, -1], [-1, -1]]},
      "A1": {"rows": 2, "cols": 2, "field": "rational", "data": [[0, 1], [1, -1]]}})");
  RunResult r = dispatch(config("flow", {f}));
  EXPECT_EQ(r.exit_code, irregular_crossing);
  EXPECT_DOUBLE_EQ(Json::parse(r.report)["irregular_location"].get<double>(), 0.5);
}

// --------------------------------------------------------------------- nbody

TEST(NBody, FindAndStability) {
  TempDir dir;
  const std::string f =
      dir.write("p.json", R"({"masses": [1, 1, 1], "alpha": 1, "positions": [[1, 0.03], [-0.52, 0.86], [-0.47, -0.88]]})");
  RunResult cc = dispatch(config("nbody-find-cc", {f}));
  ASSERT_EQ(cc.exit_code, success) << cc.diagnostic;
  EXPECT_LE(Json::parse(cc.report)["central_configuration"]["residual"].get<double>(), 1e-10);
  RunResult st = dispatch(config("nbody-stability", {f}));
  ASSERT_EQ(st.exit_code, success) << st.diagnostic;
  Json j = Json::parse(st.report);
  EXPECT_EQ(j["amended_hessian"]["inertia_V"]["morse_index"], 2);
  EXPECT_EQ(j["verdict"]["criterion"], "none");
}

TEST(NBody, NonConvergenceIsInputError) {
  TempDir dir;
  const std::string f = dir.write("p.json", R"({"masses": [1, 1, 1], "alpha": 1,
      "positions": [[1, 0.03], [-0.52, 0.86], [-0.47, -0.88]], "settings": {"max_iter": 1, "cc_tol": 1e-15}})");
  RunResult r = dispatch(config("nbody-find-cc", {f}));
  EXPECT_EQ(r.exit_code, input_error);
  EXPECT_FALSE(r.diagnostic.empty());
}

// ------------------------------------------------------------------ examples

TEST(Examples, AllRowsPassAndOutputIsByteStable) {
  ExamplesResult a = run_examples(11), b = run_examples(11);
  EXPECT_EQ(a.exit_code, success);
  for (const auto& row : a.rows) EXPECT_TRUE(row.pass) << row.anchor << ": " << row.computed;
  EXPECT_EQ(a.table, b.table);
}

TEST(Examples, InvertedSignConventionFailsTheSignIdentityRow) {
  ExampleHooks hooks;
  hooks.amended_hessian = [](const nbody::CentralConfiguration& cc, const numeric::Tolerance& tol) {
    nbody::AmendedHessianReport r = nbody::amended_hessian(cc, tol);
    r.hessU_on_Shat = -r.hessU_on_Shat;
    return r;
  };
  ExamplesResult r = run_examples(11, hooks);
  EXPECT_NE(r.exit_code, success);
  auto row = std::find_if(r.rows.begin(), r.rows.end(), [](const ExampleRow& x) { return x.anchor == "sign identity on tangent space"; });
  ASSERT_NE(row, r.rows.end());
  EXPECT_FALSE(row->pass);
  RunConfig c = config("paper-examples", {});
  EXPECT_EQ(dispatch(c).exit_code, success);
}

TEST(Examples, JordanRowReportsRankSequence) {
  ExamplesResult r = run_examples(3);
  auto row = std::find_if(r.rows.begin(), r.rows.end(), [](const ExampleRow& x) { return x.anchor == "E1 Jordan block alpha=2"; });
  ASSERT_NE(row, r.rows.end());
  EXPECT_EQ(row->computed, "ranks (3, 2, 1, 0)");
}

TEST(Examples, SeedComesFromEnvironment) {
  ::setenv("RELEQUIL_SEED", "99", 1);
  EXPECT_EQ(seed_from_env(), 99u);
  ::setenv("RELEQUIL_SEED", "junk", 1);
  const std::uint64_t fallback = seed_from_env();
  ::unsetenv("RELEQUIL_SEED");
  EXPECT_EQ(seed_from_env(), fallback);
}

TEST(Dispatch, UnknownSubcommand) { EXPECT_EQ(dispatch(config("bogus", {})).exit_code, input_error); }

}  // namespace
}  // namespace relequil::cli
