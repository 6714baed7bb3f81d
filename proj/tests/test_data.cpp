#include "doctest.h"

#include "fsbench/dataset.hpp"
#include "fsbench/errors.hpp"
#include "fsbench/preprocess.hpp"
#include "fsbench/synthetic.hpp"

#include "test_util.hpp"

#include <cmath>
#include <set>

using namespace fsbench;
using testutil::Scratch;

TEST_CASE("load_csv parses values, names and labels") {
    Scratch tmp;
    const auto path = tmp.file("tiny.csv",
                               "f1,class,f2\n"
                               "1,0,0\n"
                               "0,1,1\n"
                               "1,1,0.5\n");
    const Dataset d = load_csv(path);
    CHECK(d.name == "tiny");
    CHECK(d.n_rows() == 3);
    CHECK(d.n_cols() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"f1", "f2"});
    CHECK(d.features(0, 0) == 1.0);
    CHECK(d.features(2, 1) == 0.5);
    CHECK(d.labels[0] == 0);
    CHECK(d.labels[1] == 1);
    CHECK_FALSE(d.feature_kinds.has_value());
}

TEST_CASE("load_csv maps textual labels on request") {
    Scratch tmp;
    const auto path = tmp.file("text.csv",
                               "f1,class\n"
                               "1,Malware\n"
                               "0,benign\n");
    CsvOptions opts;
    opts.map_text_labels = true;
    const Dataset d = load_csv(path, opts);
    CHECK(d.labels[0] == 1);
    CHECK(d.labels[1] == 0);
    CHECK_THROWS_AS(load_csv(path), NonBinaryLabel);
}

TEST_CASE("load_csv keeps unparseable cells as NaN") {
    Scratch tmp;
    const auto path = tmp.file("holes.csv", "f1,f2,class\n1,?,0\n0,1,1\n");
    const Dataset d = load_csv(path);
    CHECK(std::isnan(d.features(0, 1)));
    CHECK(d.features(1, 1) == 1.0);
}

TEST_CASE("load_csv failure modes") {
    Scratch tmp;
    CHECK_THROWS_AS(load_csv(tmp.file("empty.csv", "")), EmptyFile);
    CHECK_THROWS_AS(load_csv(tmp.file("nolabel.csv", "a,b\n1,2\n")), MissingLabelColumn);
    CHECK_THROWS_AS(load_csv(tmp.file("ragged.csv", "a,class\n1,0\n1\n")), RaggedRow);
    CHECK_THROWS_AS(load_csv(tmp.file("label2.csv", "a,class\n1,2\n")), NonBinaryLabel);
    CHECK_THROWS_AS(load_csv(tmp.path("missing.csv")), Error);
    CsvOptions renamed;
    renamed.label_column = "target";
    CHECK_NOTHROW(load_csv(tmp.file("renamed.csv", "a,target\n1,0\n0,1\n"), renamed));
}

TEST_CASE("write_csv / load_csv round-trips binary data byte-exactly") {
    Scratch tmp;
    const Dataset d = testutil::random_binary(40, 6, 5);
    const auto first = tmp.path("first.csv");
    write_csv(d, first);
    const Dataset back = load_csv(first);
    CHECK(back.feature_names == d.feature_names);
    CHECK(back.features == d.features);
    CHECK(back.labels == d.labels);
    const auto second = tmp.path("second.csv");
    write_csv(back, second);
    CHECK(testutil::slurp(first) == testutil::slurp(second));
}

TEST_CASE("kinds sidecar attaches categories and defaults to Unknown") {
    Scratch tmp;
    const auto csv = tmp.file("apps.csv", "send_sms,get_tasks,class\n1,0,0\n0,1,1\n");
    const auto sidecar = tmp.file("apps.kinds.json", R"({"send_sms": "P"})");
    CHECK(default_sidecar_path(csv).value() == sidecar);
    CHECK_FALSE(default_sidecar_path(tmp.path("other.csv")).has_value());

    Dataset d = load_csv(csv);
    attach_kinds_sidecar(d, sidecar);
    REQUIRE(d.feature_kinds.has_value());
    CHECK((*d.feature_kinds)[0] == FeatureKind::Permission);
    CHECK((*d.feature_kinds)[1] == FeatureKind::Unknown);

    const DatasetMeta m = meta(d);
    CHECK(m.n_malware == 1);
    CHECK(m.n_benign == 1);
    CHECK(m.n_features == 2);
    CHECK(m.kind_histogram.at(FeatureKind::Permission) == 1);
    CHECK(m.kind_histogram.at(FeatureKind::Unknown) == 1);
}

TEST_CASE("validate_structure rejects broken datasets") {
    Dataset d = testutil::random_binary(10, 3, 7);
    CHECK_NOTHROW(d.validate_structure());

    Dataset dup = d;
    dup.feature_names[2] = dup.feature_names[0];
    CHECK_THROWS_AS(dup.validate_structure(), Error);

    Dataset bad_label = d;
    bad_label.labels[3] = 2;
    CHECK_THROWS_AS(bad_label.validate_structure(), NonBinaryLabel);

    Dataset short_names = d;
    short_names.feature_names.pop_back();
    CHECK_THROWS_AS(short_names.validate_structure(), Error);
}

TEST_CASE("drop_nan_rows keeps clean rows in order") {
    Dataset d = testutil::random_binary(6, 2, 9);
    d.features(1, 0) = std::nan("");
    d.features(4, 1) = std::nan("");
    const Dataset clean = drop_nan_rows(d);
    CHECK(clean.n_rows() == 4);
    CHECK(clean.features.row(0) == d.features.row(0));
    CHECK(clean.features.row(1) == d.features.row(2));
    CHECK(clean.labels[3] == d.labels[5]);

    Dataset hopeless = testutil::random_binary(3, 2, 9);
    hopeless.features.setConstant(std::nan(""));
    CHECK_THROWS_AS(drop_nan_rows(hopeless), AllRowsDropped);
}

TEST_CASE("dedup_rows keeps first occurrences and respects labels") {
    Dataset d;
    d.name = "dup";
    d.features.resize(5, 2);
    d.features << 1, 0, 1, 0, 0, 1, 1, 0, 0, 1;
    d.labels.resize(5);
    d.labels << 0, 0, 1, 1, 1;
    d.feature_names = {"a", "b"};
    // rows 0,1,3 share features; row 3 differs from 0/1 by label only
    const Dataset out = dedup_rows(d);
    CHECK(out.n_rows() == 3);
    CHECK(out.features(0, 0) == 1.0);
    CHECK(out.labels[0] == 0);
    CHECK(out.labels[1] == 1); // row 2 kept
    CHECK(out.labels[2] == 1); // row 3 kept: same features as row 0, new label
}

TEST_CASE("balance_undersample equalizes classes deterministically") {
    Dataset d = testutil::random_binary(200, 4, 13);
    for (Index i = 0; i < 200; ++i) d.labels[i] = i < 140 ? 0 : 1;
    const Dataset b1 = balance_undersample(d, 99);
    const Dataset b2 = balance_undersample(d, 99);
    const Dataset b3 = balance_undersample(d, 100);
    CHECK(b1.n_rows() == 120);
    CHECK((b1.labels.array() == 1).count() == 60);
    CHECK((b1.labels.array() == 0).count() == 60);
    CHECK(b1.features == b2.features);
    CHECK(b3.features != b1.features); // different seed, different draw

    // original order is preserved: labels must stay grouped 0-then-1
    Index first_one = -1;
    for (Index i = 0; i < b1.n_rows(); ++i)
        if (b1.labels[i] == 1) { first_one = i; break; }
    for (Index i = first_one; i < b1.n_rows(); ++i) CHECK(b1.labels[i] == 1);
}

TEST_CASE("take_rows and take_columns slice by index lists") {
    const Dataset d = testutil::random_binary(8, 4, 21);
    const Dataset rows = take_rows(d, {5, 1});
    CHECK(rows.n_rows() == 2);
    CHECK(rows.features.row(0) == d.features.row(5));
    CHECK(rows.labels[1] == d.labels[1]);
    CHECK_THROWS_AS(take_rows(d, {8}), IndexOutOfRange);

    const Dataset cols = take_columns(d, {3, 0});
    CHECK(cols.n_cols() == 2);
    CHECK(cols.feature_names[0] == "c3");
    CHECK(cols.features.col(1) == d.features.col(0));
    CHECK(cols.labels == d.labels);
    CHECK_THROWS_AS(take_columns(d, {-1}), IndexOutOfRange);
}

TEST_CASE("planted dataset carries its ground truth") {
    PlantedSpec spec;
    spec.rows = 300;
    spec.informative = 4;
    spec.noise = 8;
    spec.seed = 77;
    const PlantedDataset planted = make_planted_dataset(spec);
    const Dataset& d = planted.data;
    CHECK(d.n_rows() == 300);
    CHECK(d.n_cols() == 12);
    CHECK(planted.informative.size() == 4);
    CHECK(d.labels[0] == 0);
    CHECK(d.labels[1] == 1);
    CHECK_NOTHROW(d.validate_structure());

    // informative columns agree with the label ~90% of the time, noise ~50%
    const std::set<Index> info(planted.informative.begin(), planted.informative.end());
    for (Index j = 0; j < d.n_cols(); ++j) {
        Index agree = 0;
        for (Index i = 0; i < d.n_rows(); ++i)
            if (static_cast<int>(d.features(i, j)) == d.labels[i]) ++agree;
        const double rate = static_cast<double>(agree) / static_cast<double>(d.n_rows());
        if (info.count(j))
            CHECK(rate > 0.8);
        else
            CHECK(rate < 0.65);
    }

    // fully reproducible
    const PlantedDataset again = make_planted_dataset(spec);
    CHECK(again.data.features == d.features);
    CHECK(again.informative == planted.informative);
}
