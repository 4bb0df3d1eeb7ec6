#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "itac/io.hpp"
#include "support.hpp"

using namespace itac;
using namespace itac::io;
using itac::testing::data_path;
using itac::testing::reference_project;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("itac_test_io_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

IngestResult bundled_spectra() {
    const auto meta = parse_spectra_meta(read_file(data_path("raw/spectra.meta")), "spectra.meta");
    return ingest_spectra(read_file(data_path("raw/spectra.csv")), "spectra.csv", meta, standard_sample_plan());
}

template <class F>
Error capture(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e;
    }
    ADD_FAILURE() << "expected an itac::Error";
    return Error(ErrorCode::InvalidArgument, "none");
}

}  // namespace

TEST(Format, DoublesRoundTrip) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng);
        EXPECT_EQ(parse_double(format_double(v), "t"), v);
        EXPECT_EQ(parse_double(format_shortest(v), "t"), v);
    }
    EXPECT_EQ(format_shortest(83.06), "83.06");
    EXPECT_THROW(parse_double("12abc", "t"), Error);
    EXPECT_THROW(parse_int("1.5", "t"), Error);
}

TEST(Project, SaveLoadSaveIsByteIdentical) {
    const auto dir = scratch_dir("roundtrip");
    save_project(reference_project(), dir);
    for (const auto& rel : {"project.ini", "models/transparency.model", "models/hardness.model",
                            "datasets/transparency.csv", "datasets/hardness.csv", "configs/sorta_clear_40.cfg"}) {
        EXPECT_EQ(read_file(dir / rel), read_file(data_path(rel))) << rel;
    }
    const auto again = load_project(dir);
    const auto dir2 = scratch_dir("roundtrip2");
    save_project(again, dir2);
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), dir);
        EXPECT_EQ(read_file(e.path()), read_file(dir2 / rel)) << rel;
    }
    EXPECT_EQ(again.model("hardness").coefficients, reference_project().model("hardness").coefficients);
    EXPECT_EQ(again.config("ecoflex_00_45"), reference_project().config("ecoflex_00_45"));
    fs::remove_all(dir);
    fs::remove_all(dir2);
}

TEST(Project, LookupsAndDigests) {
    const auto& p = reference_project();
    EXPECT_EQ(p.model_1().property_name, "transparency");
    EXPECT_EQ(p.model_2().property_name, "hardness");
    EXPECT_EQ(capture([&] { (void)p.model("nope"); }).code(), ErrorCode::NotFound);
    EXPECT_EQ(capture([&] { (void)p.config("nope"); }).code(), ErrorCode::NotFound);
    const auto digests = p.model_digests();
    ASSERT_EQ(digests.size(), 2u);
    EXPECT_EQ(digests[0].sha256, sha256_hex(read_file(data_path(digests[0].name))));
    EXPECT_EQ(digests[0].sha256.size(), 64u);
}

TEST(Project, MissingIndexIsAnIoError) {
    EXPECT_EQ(capture([] { load_project("/nonexistent/itac"); }).code(), ErrorCode::IoError);
}

TEST(Record, ParseErrorsCarryLocation) {
    const auto e = capture([] { Record::parse("# itac model\nproperty = a\nbroken line\n", "m.model"); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("m.model:3"), std::string::npos) << e.what();
    const auto d = capture([] { Record::parse("a = 1\na = 2\n", "x"); });
    EXPECT_NE(std::string(d.what()).find("x:2"), std::string::npos);
    EXPECT_EQ(capture([] { parse_model("# itac model\nproperty = y\n", "y.model"); }).code(), ErrorCode::ParseError);
}

TEST(Record, ProvenanceHeaderIsSkipped) {
    const auto text = read_file(data_path("models/hardness.model"));
    const auto stamped = provenance_header({{"x", sha256_hex("x")}}) + text;
    const auto m = parse_model(stamped, "stamped");
    EXPECT_EQ(m.coefficients, reference_project().model("hardness").coefficients);
    EXPECT_EQ(Record::parse(stamped, "stamped").kind, "model");
}

TEST(Csv, ColumnCountMismatchReportsLine) {
    const auto e = capture([] { CsvTable::parse("# c\na,b\n1,2\n3\n", "t.csv"); });
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("t.csv:4"), std::string::npos) << e.what();
    const auto t = CsvTable::parse("# k = v\na,b\n1,x\n", "t.csv");
    EXPECT_EQ(t.meta("k"), "v");
    const auto n = capture([&] { (void)t.number(0, 1); });
    EXPECT_NE(std::string(n.what()).find("t.csv:3:2"), std::string::npos) << n.what();
}

TEST(Dataset, OutOfBoundsCompositionIsRejected) {
    const std::string text = "# itac dataset\n# property = p\n# units = u\nlabel,x1,x2,x3,value\nz,0,100,0,1\n";
    EXPECT_EQ(capture([&] { parse_dataset(text, "d.csv", ComponentBounds{}); }).code(), ErrorCode::BoundViolation);
}

TEST(Ingest, SpectraReproduceTheTransparencyDataset) {
    const auto r = bundled_spectra();
    ASSERT_EQ(r.dataset.size(), 15u);
    EXPECT_EQ(r.skipped, std::vector<std::string>{"g1"});
    const auto& bundled = reference_project().dataset("transparency");
    for (std::size_t i = 0; i < 15; ++i) {
        EXPECT_EQ(r.dataset.rows[i].label, bundled.rows[i].label);
        EXPECT_EQ(r.dataset.rows[i].composition, bundled.rows[i].composition);
        EXPECT_NEAR(r.dataset.rows[i].value, bundled.rows[i].value, 1e-9) << bundled.rows[i].label;
    }
    EXPECT_NEAR(r.dataset.rows[0].value, 83.06, 1e-9);
    EXPECT_NEAR(r.optical[0].summary.opacity_density, 0.026869, 5e-6);
}

TEST(Ingest, SpectraErrors) {
    const auto plan = standard_sample_plan();
    SpectraMeta meta;
    const auto missing = capture([&] { ingest_spectra("wavelength_nm,a1\n700,0.8\n", "s.csv", meta, plan); });
    EXPECT_EQ(missing.code(), ErrorCode::MissingBiasColumn);
    const auto unknown =
        capture([&] { ingest_spectra("wavelength_nm,zz,air\n700,0.8,0.97\n", "s.csv", meta, plan); });
    EXPECT_EQ(unknown.code(), ErrorCode::UnknownLabel);
    EXPECT_EQ(unknown.field(), "zz");
    EXPECT_EQ(capture([&] { ingest_spectra("nm,a1,air\n700,0.8,0.97\n", "s.csv", meta, plan); }).code(),
              ErrorCode::ParseError);
}

TEST(Ingest, HardnessAveragesReadings) {
    const auto text = read_file(data_path("raw/hardness_readings.csv"));
    const auto r = ingest_hardness(text, "h.csv", standard_sample_plan());
    ASSERT_EQ(r.dataset.size(), 15u);
    EXPECT_NEAR(r.dataset.rows[0].value, 84.8, 1e-9);
    for (const auto& [label, n] : r.counts) EXPECT_EQ(n, 5u) << label;
    const auto& bundled = reference_project().dataset("hardness");
    for (std::size_t i = 0; i < 15; ++i) EXPECT_NEAR(r.dataset.rows[i].value, bundled.rows[i].value, 1e-9);

    const auto single = ingest_hardness("label,reading\na1,80\n", "h.csv", standard_sample_plan());
    ASSERT_EQ(single.dataset.size(), 1u);
    EXPECT_DOUBLE_EQ(single.dataset.rows[0].value, 80.0);

    const auto bad = capture([] { ingest_hardness("label,reading\na1,80\na1,soft\n", "h.csv", standard_sample_plan()); });
    EXPECT_EQ(bad.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(bad.what()).find("h.csv:3:2"), std::string::npos) << bad.what();
}

TEST(Curves, ParseModeAndRows) {
    const auto c = parse_curve("mode,compression\nstrain,stress_kPa\n0,0\n0.1,14.5\n", "c.csv");
    EXPECT_EQ(c.mode, analysis::CurveMode::Compression);
    ASSERT_EQ(c.points.size(), 2u);
    EXPECT_THROW(parse_curve("mode,twist\nstrain,stress_kPa\n0,0\n", "c.csv"), Error);
}
