#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "vps/diagram/trace_json.hpp"
#include "vps/machine/path.hpp"

using namespace vps;
using namespace vps::diagram;
using nlohmann::json;

namespace {

void check_round_trip(const machine::Trace& t) {
    std::string text = emit_trace_json(t);
    machine::Trace back = parse_trace_json(text);
    REQUIRE(back.events.size() == t.events.size());
    CHECK(back.sourceText == t.sourceText);
    CHECK(back.output == t.output);
    for (std::size_t k = 0; k < t.events.size(); ++k) {
        const auto& a = t.events[k];
        const auto& b = back.events[k];
        CHECK(b.stepIndex == a.stepIndex);
        CHECK(b.line == a.line);
        CHECK(b.kind == a.kind);
        CHECK(b.description == a.description);
        CHECK(b.state.status == a.state.status);
        CHECK(b.state.error == a.state.error);
        CHECK(machine::snapshot_equal(a.state, b.state));
    }
    CHECK(emit_trace_json(back) == text);
}

/// Error path raised when parsing the mutated Example 1 trace document.
std::string error_path(const std::function<void(json&)>& mutate) {
    json doc = json::parse(emit_trace_json(test::run_sample("example1_int_array.mjv")));
    mutate(doc);
    try {
        parse_trace_json(doc.dump());
    } catch (const TraceJsonError& e) {
        return e.path();
    }
    FAIL("document was accepted");
    return {};
}

}  // namespace

TEST_CASE("trace json: example 1 round-trips") { check_round_trip(test::run_sample("example1_int_array.mjv")); }

TEST_CASE("trace json: every sample round-trips") {
    for (const auto& name : test::sample_programs()) {
        CAPTURE(name);
        check_round_trip(test::run_sample(name, name == "infinite_loop.mjv" ? 50 : machine::kDefaultMaxSteps));
    }
}

TEST_CASE("trace json: empty main has a single halt event") {
    auto t = test::run_source(test::main_only(""));
    json doc = json::parse(emit_trace_json(t));
    CHECK(doc["version"] == 1);
    REQUIRE(doc["events"].size() == 1);
    CHECK(doc["events"][0]["kind"] == "halt");
    CHECK(doc["events"][0]["state"]["status"] == "finished");
    check_round_trip(t);
}

TEST_CASE("trace json: friends states are referentially closed after parsing") {
    auto back = parse_trace_json(emit_trace_json(test::run_sample("friends.mjv")));
    for (const auto& e : back.events) CHECK(machine::referentially_closed(e.state));
    CHECK(back.events.back().state.heap.size() == 3);
}

TEST_CASE("trace json: schema fields") {
    json doc = json::parse(emit_trace_json(test::run_sample("example2_alias_mutation.mjv")));
    CHECK(doc["program"].is_string());
    CHECK(doc["output"].is_array());
    const auto& last = doc["events"].back();
    CHECK(last["step"] == doc["events"].size() - 1);
    const auto& state = last["state"];
    CHECK(state["frames"][0]["label"] == "main");
    CHECK(state["frames"][0]["bindings"][0] == json({{"name", "ref_p"}, {"value", {{"t", "ref"}, {"id", 1}}}}));
    const auto& node = state["heap"][0];
    CHECK(node["id"] == 1);
    CHECK(node["kind"] == "object");
    CHECK(node["class"] == "Person");
    CHECK(node["rows"][0] == json({{"name", "rut"}, {"value", {{"t", "str"}, {"v", "000"}}}}));
    CHECK(node["rows"][1] == json({{"name", "edad"}, {"value", {{"t", "int"}, {"v", 56}}}}));
    CHECK_FALSE(state.contains("error"));

    json arr = json::parse(emit_trace_json(test::run_sample("example1_int_array.mjv")));
    const auto& a = arr["events"][0]["state"]["heap"][0];
    CHECK(a["kind"] == "array");
    CHECK(a["elem"] == "int");
    CHECK(a["rows"][4] == json({{"i", 4}, {"value", {{"t", "int"}, {"v", 0}}}}));
}

TEST_CASE("trace json: error state carries its message") {
    json doc = json::parse(emit_trace_json(test::run_sample("out_of_bounds.mjv")));
    const auto& state = doc["events"].back()["state"];
    CHECK(state["status"] == "error");
    CHECK(state["error"].get<std::string>().find("index 5 out of bounds for length 2") != std::string::npos);
}

TEST_CASE("trace json: doubles, chars and non-finite values survive") {
    auto t = test::run_source(test::main_only(
        "double z = 0.0; double inf = 1.0 / z; double ninf = -1.0 / z; double nan = z / z; double third = 1.0 / 3.0;"
        "double nz = -0.0; char c = '\\u00e9'; String s = \"tab\\there\";"));
    check_round_trip(t);
    auto back = parse_trace_json(emit_trace_json(t));
    const auto& s = back.events.back().state;
    CHECK(std::isinf(std::get<double>(machine::read_path(s, "inf"))));
    CHECK(std::isnan(std::get<double>(machine::read_path(s, "nan"))));
    CHECK(std::get<double>(machine::read_path(s, "third")) == 1.0 / 3.0);
    CHECK(std::signbit(std::get<double>(machine::read_path(s, "nz"))));
    CHECK(std::get<char16_t>(machine::read_path(s, "c")) == u'é');
    CHECK(std::get<std::string>(machine::read_path(s, "s")) == "tab\there");
}

TEST_CASE("trace json: errors report a path into the document") {
    CHECK(error_path([](json& d) { d["version"] = 2; }) == "version");
    CHECK(error_path([](json& d) { d.erase("events"); }) == "events");
    CHECK(error_path([](json& d) { d["events"][1]["step"] = 5; }) == "events[1].step");
    CHECK(error_path([](json& d) { d["events"][0]["kind"] = "jump"; }) == "events[0].kind");
    CHECK(error_path([](json& d) { d["events"][1]["state"]["frames"][0]["bindings"][1]["value"]["t"] = "ptr"; }) ==
          "events[1].state.frames[0].bindings[1].value.t");
    CHECK(error_path([](json& d) { d["events"][0]["state"]["heap"][0]["rows"][2]["i"] = 7; }) ==
          "events[0].state.heap[0].rows[2].i");
    CHECK(error_path([](json& d) { d["events"][0]["state"]["heap"][0]["id"] = 2; }) == "events[0].state.heap[0].id");
    CHECK(error_path([](json& d) { d["events"][0]["state"]["heap"] = json::array(); }) == "events[0].state.heap");
    CHECK(error_path([](json& d) { d["events"][2]["state"]["status"] = "paused"; }) == "events[2].state.status");
    CHECK(error_path([](json& d) { d["events"][0]["state"]["frames"][0]["bindings"][0]["value"]["id"] = "1"; }) ==
          "events[0].state.frames[0].bindings[0].value.id");
}

TEST_CASE("trace json: malformed text") {
    try {
        parse_trace_json("{ not json");
        FAIL("accepted");
    } catch (const TraceJsonError& e) {
        CHECK(e.path().empty());
        CHECK(std::string(e.what()).rfind("$: ", 0) == 0);
    }
    CHECK_THROWS_AS(parse_trace_json("[]"), TraceJsonError);
}
