#include <gtest/gtest.h>

#include <thread>

#include "itac/server.hpp"
#include "support.hpp"

using namespace itac;
using api::json;
using itac::testing::reference_project;

namespace {

json call(const std::string& path, const std::string& body, int expect = 200) {
    const auto r = api::handle(reference_project(), path, body);
    EXPECT_EQ(r.status, expect) << path << " " << body << "\n" << r.body;
    return json::parse(r.body);
}

}  // namespace

TEST(Api, PredictMatchesLibrary) {
    const auto j = call("/predict", R"({"composition": [36, 54, 10]})");
    const Composition c(36, 54, 10);
    EXPECT_EQ(j["y1"].get<double>(), predict(reference_project().model_1(), c));
    EXPECT_EQ(j["y2"].get<double>(), predict(reference_project().model_2(), c));
    const auto one = call("/predict", R"({"composition": [36, 54, 10], "model": "hardness_full"})");
    EXPECT_EQ(one["value"].get<double>(), predict(reference_project().model("hardness_full"), c));
}

TEST(Api, ValidationErrors) {
    auto e = call("/predict", R"({"composition": [40, 40, 21]})", 400);
    EXPECT_EQ(e["error"]["code"], "SumViolation");
    EXPECT_EQ(e["error"]["field"], "composition");
    e = call("/predict", R"({"composition": [0, 100, 0]})", 400);
    EXPECT_EQ(e["error"]["code"], "BoundViolation");
    EXPECT_EQ(e["error"]["field"], "x2");
    e = call("/predict", R"({"composition": [36, 54, 10], "model": "nope"})", 404);
    EXPECT_EQ(e["error"]["code"], "NotFound");
    e = call("/predict", "{not json", 400);
    EXPECT_EQ(e["error"]["code"], "ParseError");
    e = call("/predict", "[1,2]", 400);
    EXPECT_EQ(e["error"]["code"], "InvalidArgument");
    e = call("/nowhere", "", 404);
    EXPECT_EQ(e["error"]["field"], "path");
    call("/optimize", R"({"guideline": 12})", 400);
    call("/window", R"({"config": "sorta_clear_40", "cut": "sideways"})", 400);
    call("/fps", R"({"grid": [0, 5]})", 400);
}

TEST(Api, OptimizeGuidelineFiveIsPureAc) {
    const auto j = call("/optimize", R"({"guideline": 5})");
    EXPECT_EQ(j["solution"]["composition"], json::array({100, 0, 0}));
    EXPECT_EQ(j["solution"]["D"].get<double>(), 1.0);
    ASSERT_EQ(j["config"]["criteria"].size(), 2u);
}

TEST(Api, OptimizeAcceptsExplicitCriteria) {
    const auto named = call("/optimize", R"({"config": "sorta_clear_40"})");
    const auto explicit_ = call("/optimize", json{{"criteria", named["config"]["criteria"]},
                                                  {"weights", named["config"]["weights"]}}
                                                 .dump());
    EXPECT_EQ(named["solution"], explicit_["solution"]);
}

TEST(Api, WindowReturnsRankedMembersAndSheet) {
    const auto j = call("/window", R"({"config": "sorta_clear_40", "dx": 3, "dy": 3})");
    ASSERT_GE(j["members"].size(), 3u);
    EXPECT_EQ(j["members"][0]["composition"], j["anchor"]["composition"]);
    EXPECT_EQ(j["members"][0]["composition"], json::array({77, 23, 0}));
    double prev = 2.0;
    for (const auto& m : j["members"]) {
        EXPECT_LE(m["D"].get<double>(), prev);
        prev = m["D"].get<double>();
    }
    const auto sheet = j["sheet"].get<std::string>();
    EXPECT_EQ(sheet.rfind("# itac ", 0), 0u);
    EXPECT_NE(sheet.find("sha256="), std::string::npos);
}

TEST(Api, FeasibilityAndFps) {
    const auto f = call("/feasibility", R"({"target": [55, 55], "tolerance": [2, 2]})");
    EXPECT_TRUE(f["feasible"].get<bool>());
    const auto g = call("/feasibility", R"({"target": [97.23, 44.4], "tolerance": [2, 2]})");
    EXPECT_FALSE(g["feasible"].get<bool>());
    const auto fps = call("/fps", R"({"grid": [5, 5], "points": false})");
    EXPECT_EQ(fps["count"], 4121);
    EXPECT_FALSE(fps.contains("points"));
    ASSERT_EQ(fps["maps"].size(), 3u);
    std::size_t total = 0;
    for (const auto& c : fps["maps"][0]["cells"]) total += c["count"].get<std::size_t>();
    EXPECT_EQ(total, 4121u);
    EXPECT_EQ(call("/fps", "")["points"].size(), 4121u);
}

TEST(Api, ModelsAndGuidelines) {
    const auto m = call("/models", "");
    EXPECT_EQ(m["pair"], json::array({"transparency", "hardness"}));
    EXPECT_EQ(m["models"].size(), reference_project().models.size());
    EXPECT_EQ(call("/guidelines", "")["guidelines"].size(), 9u);
}

TEST(Api, ResponsesAreDeterministic) {
    const std::string body = R"({"config": "dragonskin_30", "dx": 3, "dy": 3})";
    EXPECT_EQ(api::handle(reference_project(), "/window", body).body, api::handle(reference_project(), "/window", body).body);
}

TEST(Server, BodiesMatchInProcessHandler) {
    httplib::Server server;
    api::mount(server, reference_project());
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    const std::pair<std::string, std::string> requests[] = {
        {"/predict", R"({"composition": [36, 54, 10]})"},
        {"/optimize", R"({"guideline": 1, "t1": 55, "t2": 55})"},
        {"/window", R"({"config": "sorta_clear_40"})"},
        {"/feasibility", R"({"target": [55, 55]})"},
        {"/predict", R"({"composition": [40, 40, 21]})"},
        {"/missing", "{}"},
    };
    for (const auto& [path, body] : requests) {
        const auto expected = api::handle(reference_project(), path, body);
        const auto res = client.Post(path, body, "application/json");
        ASSERT_TRUE(res) << path;
        EXPECT_EQ(res->status, expected.status) << path;
        EXPECT_EQ(res->body, expected.body) << path;
    }
    const auto models = client.Get("/models");
    ASSERT_TRUE(models);
    EXPECT_EQ(models->body, api::handle(reference_project(), "/models", "").body);

    server.stop();
    worker.join();
}
