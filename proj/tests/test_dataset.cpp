#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fislab/dataset.hpp"
#include "fislab/error.hpp"

using namespace fislab;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

Dataset tiny(std::vector<double> features, std::vector<int> labels,
             std::vector<std::string> names) {
  Dataset d;
  d.features = std::move(features);
  d.labels = std::move(labels);
  d.feature_names = std::move(names);
  d.provenance = "test";
  d.validate();
  return d;
}

}  // namespace

TEST_CASE("synthetic generator is deterministic and respects the label rule") {
  SyntheticSpec spec;
  spec.n_features = 5;
  spec.n_samples = 500;
  spec.positive_fraction = 0.4;
  spec.seed = 99;
  const Dataset a = generate_synthetic(spec);
  const Dataset b = generate_synthetic(spec);
  CHECK(a.features == b.features);
  CHECK(a.labels == b.labels);
  CHECK(a.n_samples() == 500);
  CHECK(a.n_features() == 5);
  for (double v : a.features) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("threshold zero makes every label 1") {
  SyntheticSpec spec;
  spec.n_features = 2;
  spec.n_samples = 200;
  spec.positive_fraction = 0.5;
  spec.seed = 3;
  spec.coefficients = {1.0 / 3.0, 2.0 / 3.0};
  spec.threshold = 0.0;
  const Dataset d = generate_synthetic(spec);
  for (int l : d.labels) CHECK(l == 1);
}

TEST_CASE("empirical positive fraction approaches the target") {
  SyntheticSpec spec;
  spec.n_features = 20;
  spec.n_samples = 100000;
  spec.positive_fraction = 0.508;
  spec.seed = 12;
  const Dataset d = generate_synthetic(spec);
  const double frac =
      static_cast<double>(d.positive_count()) / static_cast<double>(d.n_samples());
  CHECK(std::fabs(frac - 0.508) < 0.01);
}

TEST_CASE("degenerate specs are rejected") {
  SyntheticSpec spec;
  spec.n_features = 1;
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
  spec.n_features = 3;
  spec.n_samples = 1;
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
  spec.n_samples = 100;
  spec.coefficients = {0.5, 0.3, 0.2};  // not increasing
  CHECK_THROWS_AS(generate_synthetic(spec), Error);
}

TEST_CASE("synthetic spec JSON round-trip") {
  SyntheticSpec spec;
  spec.n_features = 7;
  spec.n_samples = 1234;
  spec.positive_fraction = 0.25;
  spec.seed = 42;
  nlohmann::ordered_json j;
  to_json(j, spec);
  SyntheticSpec back;
  from_json(j, back);
  CHECK(back.n_features == spec.n_features);
  CHECK(back.n_samples == spec.n_samples);
  CHECK(back.positive_fraction == spec.positive_fraction);
  CHECK(back.seed == spec.seed);
}

TEST_CASE("load_csv parses numeric data") {
  const std::string path =
      write_temp("fislab_basic.csv", "f1,f2,y\n1.5,2,0\n2.5,3,1\n0.5,1,0\n");
  CsvOptions opt;
  opt.label_column = "y";
  const Dataset d = load_csv(path, opt);
  CHECK(d.n_samples() == 3);
  CHECK(d.n_features() == 2);
  CHECK(d.feature_names == std::vector<std::string>{"f1", "f2"});
  CHECK(d.at(1, 0) == doctest::Approx(2.5));
  CHECK(d.labels == std::vector<int>{0, 1, 0});
}

TEST_CASE("load_csv rejects non-binary labels naming the row") {
  const std::string path = write_temp("fislab_badlabel.csv", "f1,y\n1,0\n2,2\n");
  CsvOptions opt;
  opt.label_column = "y";
  CHECK_THROWS_WITH_AS(load_csv(path, opt),
                       doctest::Contains("label not binary"), Error);
}

TEST_CASE("load_csv rejects unparsable cells naming row and column") {
  const std::string path = write_temp("fislab_badcell.csv", "f1,y\n1,0\nx,1\n");
  CsvOptions opt;
  opt.label_column = "y";
  // a lone bad token makes the column categorical; default policy rejects it
  CHECK_THROWS_WITH_AS(load_csv(path, opt), doctest::Contains("categorical"), Error);
}

TEST_CASE("ordinal encoding uses first-appearance order") {
  const std::string path = write_temp(
      "fislab_ordinal.csv", "color,y\nred,0\nblue,1\nred,0\ngreen,1\n");
  CsvOptions opt;
  opt.label_column = "y";
  opt.categorical = CsvOptions::Categorical::ordinal;
  const Dataset d = load_csv(path, opt);
  CHECK(d.at(0, 0) == doctest::Approx(0.0));  // red
  CHECK(d.at(1, 0) == doctest::Approx(1.0));  // blue
  CHECK(d.at(2, 0) == doctest::Approx(0.0));  // red again
  CHECK(d.at(3, 0) == doctest::Approx(2.0));  // green
}

TEST_CASE("one-hot encoding expands levels") {
  const std::string path =
      write_temp("fislab_onehot.csv", "c,x,y\na,1,0\nb,2,1\na,3,0\n");
  CsvOptions opt;
  opt.label_column = "y";
  opt.categorical = CsvOptions::Categorical::one_hot;
  const Dataset d = load_csv(path, opt);
  CHECK(d.feature_names == std::vector<std::string>{"c=a", "c=b", "x"});
  CHECK(d.at(0, 0) == doctest::Approx(1.0));
  CHECK(d.at(1, 1) == doctest::Approx(1.0));
  CHECK(d.at(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("missing values: reject by default, median with the flag") {
  const std::string path =
      write_temp("fislab_missing.csv", "f1,y\n1,0\n,1\n5,0\n9,1\n");
  CsvOptions opt;
  opt.label_column = "y";
  CHECK_THROWS_WITH_AS(load_csv(path, opt), doctest::Contains("missing"), Error);
  opt.missing = CsvOptions::Missing::impute_median;
  const Dataset d = load_csv(path, opt);
  CHECK(d.at(1, 0) == doctest::Approx(5.0));  // median of {1,5,9}
}

TEST_CASE("load_csv error paths") {
  CsvOptions opt;
  opt.label_column = "y";
  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", opt), Error);
  const std::string empty = write_temp("fislab_empty.csv", "f1,y\n");
  CHECK_THROWS_AS(load_csv(empty, opt), Error);
  const std::string noy = write_temp("fislab_noy.csv", "f1,f2\n1,2\n");
  CHECK_THROWS_WITH_AS(load_csv(noy, opt), doctest::Contains("label column"), Error);
}

TEST_CASE("csv write/read round trip") {
  SyntheticSpec spec;
  spec.n_features = 3;
  spec.n_samples = 50;
  spec.positive_fraction = 0.5;
  spec.seed = 8;
  const Dataset d = generate_synthetic(spec);
  const auto path = std::filesystem::temp_directory_path() / "fislab_roundtrip.csv";
  write_csv(d, path.string());
  CsvOptions opt;
  opt.label_column = "label";
  const Dataset back = load_csv(path.string(), opt);
  CHECK(back.labels == d.labels);
  REQUIRE(back.features.size() == d.features.size());
  for (std::size_t i = 0; i < d.features.size(); ++i) {
    CHECK(back.features[i] == doctest::Approx(d.features[i]).epsilon(1e-15));
  }
}

TEST_CASE("stratified_subsample keeps proportions and determinism") {
  std::vector<double> feats;
  std::vector<int> labels;
  for (int i = 0; i < 100; ++i) {
    feats.push_back(i);
    labels.push_back(i < 30 ? 1 : 0);
  }
  const Dataset d = tiny(feats, labels, {"f"});

  SUBCASE("proportional rounding") {
    const Dataset s = stratified_subsample(d, 10, 5);
    CHECK(s.n_samples() == 10);
    CHECK(s.positive_count() == 3);
  }
  SUBCASE("identity draw returns the same rows") {
    const Dataset s = stratified_subsample(d, 100, 5);
    CHECK(s.features == d.features);
    CHECK(s.labels == d.labels);
  }
  SUBCASE("determinism") {
    const Dataset s1 = stratified_subsample(d, 37, 123);
    const Dataset s2 = stratified_subsample(d, 37, 123);
    CHECK(s1.features == s2.features);
    const Dataset s3 = stratified_subsample(d, 37, 124);
    CHECK(s1.features != s3.features);
  }
  SUBCASE("nested subsample keeps the ratio guarantee") {
    const Dataset s1 = stratified_subsample(d, 50, 9);
    const Dataset s2 = stratified_subsample(s1, 10, 10);
    CHECK(s2.positive_count() == 3);
  }
}

TEST_CASE("stratified_subsample guards both classes") {
  std::vector<double> feats;
  std::vector<int> labels;
  for (int i = 0; i < 10; ++i) {
    feats.push_back(i);
    labels.push_back(i == 0 ? 1 : 0);
  }
  const Dataset d = tiny(feats, labels, {"f"});
  const Dataset s = stratified_subsample(d, 2, 77);
  CHECK(s.positive_count() == 1);  // the +-1 clamp keeps the rare class

  std::vector<int> ones(10, 1);
  const Dataset single = tiny(feats, ones, {"f"});
  CHECK_THROWS_AS(stratified_subsample(single, 5, 1), Error);
  CHECK_THROWS_AS(stratified_subsample(d, 1, 1), Error);
  CHECK_THROWS_AS(stratified_subsample(d, 11, 1), Error);
}

TEST_CASE("drop_features") {
  const Dataset d = tiny({1, 2, 3, 4, 5, 6}, {0, 1}, {"a", "b", "c"});
  SUBCASE("drop nothing") {
    const Dataset out = drop_features(d, {});
    CHECK(out.features == d.features);
  }
  SUBCASE("drop middle preserves outer order") {
    const Dataset out = drop_features(d, {"b"});
    CHECK(out.feature_names == std::vector<std::string>{"a", "c"});
    CHECK(out.features == std::vector<double>{1, 3, 4, 6});
  }
  CHECK_THROWS_AS(drop_features(d, {"zzz"}), Error);
  CHECK_THROWS_AS(drop_features(d, {"a", "b", "c"}), Error);
}

TEST_CASE("correlation_matrix values and symmetry") {
  SUBCASE("duplicate and negated features") {
    const Dataset d = tiny({1, 1, -1, 2, 2, -2, 3, 3, -3, 4, 4, -4}, {0, 0, 1, 1},
                           {"x", "dup", "neg"});
    const auto r = correlation_matrix(d);
    CHECK(r[0 * 3 + 1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r[0 * 3 + 2] == doctest::Approx(-1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(r[i * 3 + i] == 1.0);
      for (std::size_t j = 0; j < 3; ++j) CHECK(r[i * 3 + j] == r[j * 3 + i]);
    }
  }
  SUBCASE("hand Pearson value") {
    const Dataset d = tiny({1, 1, 2, 2, 3, 4}, {0, 0, 1}, {"x", "z"});
    const auto r = correlation_matrix(d);
    CHECK(r[1] == doctest::Approx(0.9819805060619657).epsilon(1e-12));
  }
  SUBCASE("zero variance errors with the name") {
    const Dataset d = tiny({1, 7, 2, 7, 3, 7}, {0, 0, 1}, {"x", "const"});
    CHECK_THROWS_WITH_AS(correlation_matrix(d), doctest::Contains("const"), Error);
  }
}

TEST_CASE("prune_correlated greedy loop") {
  SUBCASE("cut 1.0 with no duplicates keeps everything") {
    const Dataset d = tiny({1, 9, 2, 3, 3, 8, 4, 1}, {0, 0, 1, 1}, {"a", "b"});
    const auto [out, log] = prune_correlated(d, {0.5, 0.5}, 1.0);
    CHECK(out.n_features() == 2);
    CHECK(log.entries.empty());
    CHECK_FALSE(log.too_few_features);
  }
  SUBCASE("duplicate column: weaker removed") {
    const Dataset d = tiny({1, 1, 5, 2, 2, 1, 3, 3, 4, 4, 4, 2}, {0, 0, 1, 1},
                           {"strong", "weak", "noise"});
    const auto [out, log] = prune_correlated(d, {0.6, 0.4, 0.2}, 0.9);
    CHECK(out.feature_names == std::vector<std::string>{"strong", "noise"});
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].kept == "strong");
    CHECK(log.entries[0].removed == "weak");
    CHECK(log.entries[0].correlation >= 0.9);
  }
  SUBCASE("greedy trace: remove B from the strongest pair, then stop") {
    // A and B strongly correlated, B and C moderately, A and C weakly.
    const std::vector<double> a = {0.1, 0.9, 0.35, 0.62, 0.48, 0.77, 0.21, 0.55};
    std::vector<double> b = a;
    std::vector<double> c(8);
    const std::vector<double> noise = {0.9, -0.6, 0.2, -0.8, 0.5, -0.1, 0.7, -0.3};
    for (int i = 0; i < 8; ++i) {
      b[i] = a[i] + 0.02 * noise[i];
      c[i] = 0.55 * b[i] + 0.45 * (0.5 + 0.5 * noise[i]);
    }
    std::vector<double> feats;
    std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
    for (int i = 0; i < 8; ++i) {
      feats.push_back(a[i]);
      feats.push_back(b[i]);
      feats.push_back(c[i]);
    }
    const Dataset d = tiny(feats, labels, {"A", "B", "C"});
    const auto r = correlation_matrix(d);
    REQUIRE(std::fabs(r[0 * 3 + 1]) > 0.9);            // AB strongest
    REQUIRE(std::fabs(r[1 * 3 + 2]) > std::fabs(r[0 * 3 + 2]));  // BC > AC
    REQUIRE(std::fabs(r[1 * 3 + 2]) < std::fabs(r[0 * 3 + 1]));
    const double cut = 0.9;
    REQUIRE(std::fabs(r[1 * 3 + 2]) < cut);

    const auto [out, log] = prune_correlated(d, {0.5, 0.3, 0.2}, cut);
    CHECK(out.feature_names == std::vector<std::string>{"A", "C"});
    REQUIRE(log.entries.size() == 1);
    CHECK(log.entries[0].removed == "B");
  }
  SUBCASE("pruning to one feature sets the warning flag") {
    const Dataset d =
        tiny({1, 1, 2, 2, 3, 3, 4, 4}, {0, 0, 1, 1}, {"a", "a2"});
    const auto [out, log] = prune_correlated(d, {0.9, 0.1}, 0.5);
    CHECK(out.n_features() == 1);
    CHECK(log.too_few_features);
  }
  SUBCASE("no surviving pair exceeds the standard") {
    SyntheticSpec spec;
    spec.n_features = 6;
    spec.n_samples = 300;
    spec.positive_fraction = 0.5;
    spec.seed = 21;
    Dataset d = generate_synthetic(spec);
    // duplicate one column under another name
    Dataset dd = d;
    dd.feature_names.push_back("dup");
    std::vector<double> nf;
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
      const double* row = d.row(i);
      nf.insert(nf.end(), row, row + d.n_features());
      nf.push_back(row[2]);
    }
    dd.features = std::move(nf);
    dd.validate();
    const auto [out, log] =
        prune_correlated(dd, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.25}, 0.8);
    const auto r2 = correlation_matrix(out);
    for (std::size_t i = 0; i < out.n_features(); ++i) {
      for (std::size_t j = i + 1; j < out.n_features(); ++j) {
        CHECK(std::fabs(r2[i * out.n_features() + j]) <= 0.8);
      }
    }
  }
}
