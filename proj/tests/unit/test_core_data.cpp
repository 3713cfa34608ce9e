#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rpsgmm/bundle_io.hpp"
#include "rpsgmm/classifier.hpp"
#include "rpsgmm/csv.hpp"
#include "rpsgmm/errors.hpp"
#include "rpsgmm/synthetic.hpp"

using namespace rpsgmm;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::vector<std::string> kSchema = {"hv_anom", "p_water"};

}  // namespace

TEST_CASE("load_dataset: grouping, sorting, labels") {
  const auto path = temp_file("rpsgmm_ds.csv");
  // Rows deliberately out of day order.
  write(path,
        "series_id,day,channel,value,label\n"
        "lake1,1,hv_anom,-2.0,drain\n"
        "lake1,0,hv_anom,-1.0,drain\n"
        "lake1,0,p_water,10.0,drain\n"
        "lake1,1,p_water,20.0,drain\n"
        "lake2,0,hv_anom,-5.0,buried\n"
        "lake2,0,p_water,0.0,buried\n"
        "lake2,1,hv_anom,-6.0,buried\n"
        "lake2,1,p_water,1.0,\n");
  const auto data = load_dataset(path, kSchema);
  REQUIRE(data.size() == 2);
  CHECK(data.series[0].id == "lake1");
  CHECK(data.series[0].timestamps == std::vector<int>{0, 1});
  CHECK(data.series[0].values(0, 0) == -1.0);
  CHECK(data.series[0].values(1, 1) == 20.0);
  CHECK(*data.series[0].label == "drain");
  CHECK(*data.series[1].label == "buried");  // empty label cells are ignored
  CHECK(data.label_set() == std::vector<std::string>{"drain", "buried"});
}

TEST_CASE("load_dataset: error paths name the offending line") {
  const auto path = temp_file("rpsgmm_bad.csv");

  write(path,
        "series_id,day,channel,value,label\n"
        "lake1,0,hv_anom,not_a_number,drain\n");
  CHECK_THROWS_AS(load_dataset(path, kSchema), ParseError);
  try {
    load_dataset(path, kSchema);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }

  write(path,
        "series_id,day,channel,value,label\n"
        "lake1,0,unknown_channel,1.0,drain\n");
  CHECK_THROWS_AS(load_dataset(path, kSchema), SchemaError);

  write(path,
        "series_id,day,channel,value,label\n"
        "lake1,0,hv_anom,1.0,drain\n"
        "lake1,0,p_water,2.0,drain\n"
        "lake1,0,hv_anom,3.0,drain\n");
  CHECK_THROWS_AS(load_dataset(path, kSchema), DuplicateSampleError);

  // A day missing one channel of the schema.
  write(path,
        "series_id,day,channel,value,label\n"
        "lake1,0,hv_anom,1.0,drain\n");
  CHECK_THROWS_AS(load_dataset(path, kSchema), SchemaError);
}

TEST_CASE("load_dataset: deterministic and round-trips through save") {
  SyntheticSpec spec;
  spec.per_class = 2;
  spec.length = 30;
  spec.noise = 0.8;
  const auto data = generate_synthetic(spec);

  const auto path = temp_file("rpsgmm_rt.csv");
  save_dataset(data, path);
  const auto loaded = load_dataset(path, data.channel_schema);
  const auto loaded2 = load_dataset(path, data.channel_schema);
  REQUIRE(loaded.size() == data.size());
  for (int i = 0; i < data.size(); ++i) {
    CHECK(loaded.series[i].id == data.series[i].id);
    CHECK(loaded.series[i].values == data.series[i].values);
    CHECK(loaded.series[i].label == data.series[i].label);
    CHECK(loaded.series[i].values == loaded2.series[i].values);
  }
}

TEST_CASE("load_dataset: class counts of a full-size lake file") {
  // 777 series with the real label distribution, 2 days x 2 channels each.
  std::ostringstream csv;
  csv << "series_id,day,channel,value,label\n";
  auto emit = [&](const std::string& label, int count, int base) {
    for (int i = 0; i < count; ++i) {
      const std::string id = "lake" + std::to_string(base + i);
      for (int day = 0; day < 2; ++day) {
        csv << id << ',' << day << ",hv_anom,-1.0," << label << '\n';
        csv << id << ',' << day << ",p_water,5.0," << label << '\n';
      }
    }
  };
  emit("refreeze", 189, 0);
  emit("drain", 392, 1000);
  emit("buried", 196, 2000);

  const auto path = temp_file("rpsgmm_777.csv");
  write(path, csv.str());
  const auto data = load_dataset(path, kSchema);
  REQUIRE(data.size() == 777);
  std::map<std::string, int> counts;
  for (const auto& s : data.series) ++counts[*s.label];
  CHECK(counts["refreeze"] == 189);
  CHECK(counts["drain"] == 392);
  CHECK(counts["buried"] == 196);
}

namespace {

ClassifierBundle trained_bundle() {
  SyntheticSpec spec;
  spec.per_class = 1;
  spec.length = 80;
  spec.noise = 0.5;
  const auto data = generate_synthetic(spec);
  std::map<std::string, TimeSeries> reps;
  for (const auto& s : data.series) reps[*s.label] = s;
  FitConfig config;
  config.n_components = 3;
  config.n_init = 3;
  config.seed = 21;
  return train(reps, {2, 3}, config);
}

}  // namespace

TEST_CASE("bundle round-trip is bit exact") {
  const auto bundle = trained_bundle();
  const auto path = temp_file("rpsgmm_bundle.txt");
  save_bundle(bundle, path);
  const auto loaded = load_bundle(path);

  CHECK(loaded.params.tau == bundle.params.tau);
  CHECK(loaded.params.dim == bundle.params.dim);
  CHECK(loaded.class_order == bundle.class_order);
  CHECK(loaded.channel_schema == bundle.channel_schema);
  for (const auto& label : bundle.class_order) {
    const auto& a = bundle.models.at(label);
    const auto& b = loaded.models.at(label);
    CHECK(a.weights == b.weights);
    for (int j = 0; j < a.components(); ++j) {
      CHECK(a.means[j] == b.means[j]);
      CHECK(a.covariances[j] == b.covariances[j]);
    }
    CHECK(a.meta.final_log_likelihood == b.meta.final_log_likelihood);
    CHECK(a.meta.iterations == b.meta.iterations);
    CHECK(a.meta.seed == b.meta.seed);
    CHECK(a.meta.regularization == b.meta.regularization);
  }
}

TEST_CASE("bundle round-trip preserves classification decisions") {
  const auto bundle = trained_bundle();
  const auto path = temp_file("rpsgmm_bundle2.txt");
  save_bundle(bundle, path);
  const auto loaded = load_bundle(path);

  SyntheticSpec spec;
  spec.per_class = 5;
  spec.length = 80;
  spec.noise = 1.5;
  spec.seed = 99;
  for (const auto& s : generate_synthetic(spec).series) {
    const auto a = classify(s, bundle);
    const auto b = classify(s, loaded);
    CHECK(a.label == b.label);
    for (const auto& [label, score] : a.scores) {
      CHECK(score == b.scores.at(label));
    }
  }
}

TEST_CASE("bundle: unknown version and corruption are rejected") {
  const auto bundle = trained_bundle();
  const auto path = temp_file("rpsgmm_bundle3.txt");
  save_bundle(bundle, path);
  std::string text = read(path);

  // Unknown format version.
  std::string versioned = text;
  versioned.replace(versioned.find("v1"), 2, "v9");
  CHECK_THROWS_AS(deserialize_bundle(versioned), IncompatibilityError);

  // Not a bundle at all.
  CHECK_THROWS_AS(deserialize_bundle("something,else\n1,2\n"),
                  IncompatibilityError);

  // Flip one byte in the body.
  std::string corrupt = text;
  const std::size_t pos = corrupt.find("weights") + 10;
  corrupt[pos] = corrupt[pos] == '0' ? '1' : '0';
  CHECK_THROWS_AS(deserialize_bundle(corrupt), IntegrityError);

  // Truncation.
  CHECK_THROWS_AS(deserialize_bundle(text.substr(0, text.size() / 2)),
                  IntegrityError);
}

TEST_CASE("TimeSeries invariants") {
  TimeSeries ts;
  ts.id = "bad";
  ts.channels = {"x"};
  ts.timestamps = {0, 0};
  ts.values.resize(2, 1);
  ts.values << 1, 2;
  CHECK_THROWS_AS(ts.validate(), SchemaError);  // non-increasing timestamps

  ts.timestamps = {0, 1};
  ts.values(1, 0) = std::nan("");
  CHECK_THROWS_AS(ts.validate(), SchemaError);  // NaN in non-raw series
  ts.raw = true;
  CHECK_NOTHROW(ts.validate());
}
