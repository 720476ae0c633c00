#include <cmath>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "vps/lang/validator.hpp"
#include "vps/machine/interpreter.hpp"
#include "vps/machine/path.hpp"

using namespace vps;
using namespace vps::machine;

namespace {

const MachineState& final_state(const Trace& t) { return t.events.back().state; }

RefV ref_of(const MachineState& s, const std::string& name) {
    const Value* v = s.top().find(name);
    REQUIRE(v != nullptr);
    REQUIRE(std::holds_alternative<RefV>(*v));
    return std::get<RefV>(*v);
}

/// Runs to the first event whose description mentions `needle`.
const TraceEvent& event_after(const Trace& t, const std::string& needle) {
    for (const auto& e : t.events) {
        if (e.description.find(needle) != std::string::npos) return e;
    }
    FAIL("no event mentions " << needle);
    return t.events.back();
}

PathErrorKind path_error(const MachineState& s, const std::string& path) {
    try {
        read_path(s, path);
    } catch (const PathError& e) {
        return e.kind();
    }
    FAIL("read_path(" << path << ") did not fail");
    return PathErrorKind::Malformed;
}

}  // namespace

TEST_CASE("init_machine: one empty main frame") {
    for (const char* name : {"person.mjv", "friends.mjv"}) {
        CAPTURE(name);
        auto s = init_machine(test::compile_sample(name));
        REQUIRE(s.frames.size() == 1);
        CHECK(s.frames[0].label == "main");
        CHECK(s.frames[0].bindings.empty());
        CHECK(s.heap.size() == 0);
        CHECK(s.status == Status::Running);
        CHECK(s.nextLine.has_value());
    }
}

TEST_CASE("init_machine: empty main finishes immediately") {
    auto s = init_machine(lang::compile(test::main_only("")));
    CHECK(s.status == Status::Finished);
    CHECK_FALSE(s.nextLine.has_value());
}

TEST_CASE("step: array then alias share heap node 1") {
    auto prog = lang::compile(test::main_only("int[] array_enteros = new int[5];\nint[] ref = array_enteros;"));
    auto s0 = init_machine(prog);
    auto s1 = step(s0, prog).event.state;
    auto s2 = step(s1, prog).event.state;
    CHECK(ref_of(s2, "array_enteros").id == 1);
    CHECK(ref_of(s2, "ref").id == 1);
    REQUIRE(s2.heap.size() == 1);
    const auto& arr = std::get<ArrayNode>(s2.heap.at(1));
    CHECK(arr.elemType == "int");
    REQUIRE(arr.cells.size() == 5);
    for (const auto& c : arr.cells) CHECK(value_equal(c, Value{std::int32_t{0}}));

    // Earlier snapshots are untouched.
    CHECK(s0.heap.size() == 0);
    CHECK(s1.frames[0].bindings.size() == 1);
}

TEST_CASE("step: mutation through an alias is visible through the original") {
    auto t = test::run_sample("example2_alias_mutation.mjv");
    const auto& s = final_state(t);
    CHECK(value_equal(read_path(s, "ref_p.rut"), Value{std::string("000")}));
    CHECK(value_equal(read_path(s, "ref_p.edad"), Value{std::int32_t{56}}));
    CHECK(ref_of(s, "ref_p") == ref_of(s, "ref2"));
}

TEST_CASE("step: index out of bounds halts with an error") {
    auto t = test::run_source(test::main_only("int[] a = new int[2];\nint x = a[5];"));
    const auto& s = final_state(t);
    CHECK(s.status == Status::Error);
    CHECK(s.errorKind == ErrorKind::IndexOutOfBounds);
    CHECK(s.error.find("index 5 out of bounds for length 2") != std::string::npos);
}

TEST_CASE("step: a non-running state cannot be stepped") {
    auto prog = lang::compile(test::main_only(""));
    CHECK_THROWS_AS(step(init_machine(prog), prog), std::logic_error);
}

TEST_CASE("step: constructor runs in its own frame after field defaults") {
    auto t = test::run_sample("person.mjv");
    REQUIRE(t.events.size() == 6);
    const auto& alloc = t.events[0];
    CHECK(alloc.kind == EventKind::Alloc);
    REQUIRE(alloc.state.frames.size() == 2);
    CHECK(alloc.state.frames[1].label == "Person.Person");
    const auto& obj = std::get<ObjectNode>(alloc.state.heap.at(1));
    CHECK(value_equal(*obj.find("rut"), Value{std::string("")}));
    CHECK(value_equal(*obj.find("edad"), Value{std::int32_t{0}}));
    CHECK(t.events[3].kind == EventKind::Return);
    CHECK(t.events[3].state.frames.size() == 1);
    CHECK(t.events[5].kind == EventKind::Halt);
}

TEST_CASE("step: object fields take Java defaults") {
    auto t = test::run_source(
        "class D { public int i; public double d; public boolean b; public char c; public String s; public D n; }\n" +
        test::main_only("D x = new D();"));
    const auto& s = final_state(t);
    CHECK(s.status == Status::Finished);
    const auto& o = std::get<ObjectNode>(s.heap.at(1));
    REQUIRE(o.fields.size() == 6);
    CHECK(value_equal(o.fields[0].value, Value{std::int32_t{0}}));
    CHECK(value_equal(o.fields[1].value, Value{0.0}));
    CHECK(value_equal(o.fields[2].value, Value{false}));
    CHECK(value_equal(o.fields[3].value, Value{char16_t{0}}));
    CHECK(value_equal(o.fields[4].value, Value{std::string()}));
    CHECK(is_null(o.fields[5].value));
}

TEST_CASE("run_to_end: two-statement array program is three events") {
    auto t = test::run_sample("example1_int_array.mjv");
    REQUIRE(t.events.size() == 3);
    CHECK(t.events[2].kind == EventKind::Halt);
    CHECK(t.finalStatus() == Status::Finished);
}

TEST_CASE("run_to_end: step budget") {
    auto t = test::run_source(test::main_only("while (true) {}"), 10);
    REQUIRE(t.events.size() == 10);
    CHECK(t.finalStatus() == Status::Error);
    CHECK(final_state(t).errorKind == ErrorKind::StepBudget);
    CHECK(final_state(t).error == "step budget exceeded");
    for (std::size_t k = 0; k + 1 < t.events.size(); ++k) CHECK(t.events[k].state.status == Status::Running);

    auto one = test::run_source(test::main_only("int x = 1; int y = 2;"), 1);
    CHECK(one.events.size() == 1);
    CHECK(one.finalStatus() == Status::Error);

    // A program that needs exactly maxSteps events still finishes.
    auto exact = test::run_source(test::main_only("int x = 1;"), 2);
    CHECK(exact.events.size() == 2);
    CHECK(exact.finalStatus() == Status::Finished);
}

TEST_CASE("run_to_end: friends program ends with three nodes") {
    auto t = test::run_sample("friends.mjv");
    const auto& s = final_state(t);
    REQUIRE(s.heap.size() == 3);
    CHECK(std::get<ObjectNode>(s.heap.at(1)).className == "Person");
    CHECK(std::get<ObjectNode>(s.heap.at(2)).className == "Person");
    CHECK(std::get<ObjectNode>(s.heap.at(3)).className == "Friends");
    CHECK(t.events.front().state.heap.size() < s.heap.size());
}

TEST_CASE("run_to_end: println output and method calls") {
    auto t = test::run_sample("linked_list.mjv");
    CHECK(t.finalStatus() == Status::Finished);
    REQUIRE(t.output.size() == 1);
    CHECK(t.output[0] == "sum = 6");
    const auto& s = final_state(t);
    CHECK(value_equal(read_path(s, "squares[3]"), Value{std::int32_t{9}}));
    CHECK(value_equal(read_path(s, "head.next.next.value"), Value{std::int32_t{3}}));
    std::size_t deepest = 0;
    for (const auto& e : t.events) deepest = std::max(deepest, e.state.frames.size());
    CHECK(deepest == 4);  // main -> sum -> sum -> sum
}

TEST_CASE("run_to_end: runtime error kinds") {
    auto oob = test::run_sample("out_of_bounds.mjv");
    CHECK(final_state(oob).errorKind == ErrorKind::IndexOutOfBounds);
    auto npe = test::run_sample("null_dereference.mjv");
    CHECK(final_state(npe).errorKind == ErrorKind::NullPointer);
    CHECK(final_state(npe).error.find("NullPointerException") != std::string::npos);
    auto div = test::run_source(test::main_only("int z = 0; int q = 1 / z;"));
    CHECK(final_state(div).errorKind == ErrorKind::DivisionByZero);
    auto mod = test::run_source(test::main_only("int z = 0; int q = 1 % z;"));
    CHECK(final_state(mod).errorKind == ErrorKind::DivisionByZero);
}

TEST_CASE("int arithmetic wraps and double division follows binary64") {
    auto t = test::run_source(test::main_only(
        "int a = 2147483647 + 1; int b = -2147483648 - 1; int c = 65536 * 65536;"
        "double z = 0.0; double inf = 1.0 / z; double nan = z / z; int m = -7 % 3; int d = -7 / 2;"));
    const auto& s = final_state(t);
    CHECK(t.finalStatus() == Status::Finished);
    CHECK(std::get<std::int32_t>(read_path(s, "a")) == INT32_MIN);
    CHECK(std::get<std::int32_t>(read_path(s, "b")) == INT32_MAX);
    CHECK(std::get<std::int32_t>(read_path(s, "c")) == 0);
    CHECK(std::isinf(std::get<double>(read_path(s, "inf"))));
    CHECK(std::isnan(std::get<double>(read_path(s, "nan"))));
    CHECK(std::get<std::int32_t>(read_path(s, "m")) == -1);
    CHECK(std::get<std::int32_t>(read_path(s, "d")) == -3);
}

TEST_CASE("read_path: constructed object and array of objects") {
    auto person = final_state(test::run_sample("person.mjv"));
    CHECK(value_equal(read_path(person, "ref_p.rut"), Value{std::string("234")}));
    CHECK(value_equal(read_path(person, "ref_p"), Value{RefV{1}}));

    auto arr = final_state(test::run_sample("array_of_persons.mjv"));
    CHECK(value_equal(read_path(arr, "array_personas[0].rut"), Value{std::string("000")}));
    CHECK(value_equal(read_path(arr, "array_personas[0].edad"), Value{std::int32_t{56}}));
    CHECK(value_equal(read_path(arr, "array_personas[1].edad"), Value{std::int32_t{46}}));
    CHECK(value_equal(read_path(arr, "array_personas.length"), Value{std::int32_t{2}}));
}

TEST_CASE("read_path: distinct error kinds") {
    auto t = test::run_source(
        "class P { public String rut; }\n" + test::main_only("P ref_p = null; int[] a = new int[2];"));
    const auto& s = final_state(t);
    CHECK(path_error(s, "ref_p.rut") == PathErrorKind::NullTraversal);
    CHECK(path_error(s, "nobody") == PathErrorKind::UnknownBinding);
    CHECK(path_error(s, "a[2]") == PathErrorKind::IndexOutOfBounds);
    CHECK(path_error(s, "a[-1]") == PathErrorKind::IndexOutOfBounds);
    CHECK(path_error(s, "a.size") == PathErrorKind::UnknownField);
    CHECK(path_error(s, "a[") == PathErrorKind::Malformed);
}

TEST_CASE("snapshot_equal: reflexive, and sensitive to one cell") {
    auto t = test::run_source(test::main_only("int[] a = new int[3]; a[1] = 4; a[1] = 5;"));
    const auto& s3 = t.events[2].state;
    CHECK(snapshot_equal(s3, s3));
    CHECK_FALSE(snapshot_equal(t.events[1].state, s3));
    CHECK(snapshot_equal(t.events[2].state, t.events[3].state));
}

TEST_CASE("determinism: two runs are event-wise equal") {
    for (const auto& name : test::sample_programs()) {
        CAPTURE(name);
        auto a = test::run_sample(name);
        auto b = test::run_sample(name);
        REQUIRE(a.events.size() == b.events.size());
        for (std::size_t k = 0; k < a.events.size(); ++k) {
            CHECK(snapshot_equal(a.events[k].state, b.events[k].state));
            CHECK(a.events[k].description == b.events[k].description);
        }
    }
}

TEST_CASE("trace invariants hold for every sample") {
    for (const auto& name : test::sample_programs()) {
        CAPTURE(name);
        auto t = test::run_sample(name);
        REQUIRE_FALSE(t.events.empty());
        for (std::size_t k = 0; k < t.events.size(); ++k) {
            const auto& s = t.events[k].state;
            CHECK(t.events[k].stepIndex == k);
            CHECK(s.stepIndex == k);
            CHECK(referentially_closed(s));
            bool last = k + 1 == t.events.size();
            CHECK((s.status == Status::Running) != last);
            if (k > 0) {
                const auto& prev = t.events[k - 1].state;
                CHECK(prev.heap.size() <= s.heap.size());
                for (auto id : prev.heap.ids()) {
                    const auto* a = std::get_if<ArrayNode>(&prev.heap.at(id));
                    if (a) CHECK(std::get<ArrayNode>(s.heap.at(id)).cells.size() == a->cells.size());
                    else CHECK(std::get<ObjectNode>(s.heap.at(id)).className ==
                               std::get<ObjectNode>(prev.heap.at(id)).className);
                }
            }
        }
    }
}

TEST_CASE("no garbage collection: orphaned nodes stay") {
    auto t = test::run_source(test::main_only("int[] a = new int[1]; a = new int[2]; a = null;"));
    const auto& s = final_state(t);
    CHECK(s.heap.size() == 2);
    CHECK(is_null(*s.top().find("a")));
    CHECK(count_refs(s) == 0);
}

TEST_CASE("locals go out of scope at the end of a block") {
    auto t = test::run_source(test::main_only("int i = 0; while (i < 2) { int sq = i * i; i = i + 1; } int done = 1;"));
    const auto& s = final_state(t);
    CHECK(s.top().find("sq") == nullptr);
    CHECK(s.top().find("done") != nullptr);
    bool sawSq = false;
    for (const auto& e : t.events) sawSq = sawSq || e.state.top().find("sq") != nullptr;
    CHECK(sawSq);
}

TEST_CASE("if/else takes one branch") {
    auto t = test::run_source(test::main_only("int x = 3; int y = 0; if (x > 2) { y = 1; } else { y = 2; }"));
    CHECK(std::get<std::int32_t>(read_path(final_state(t), "y")) == 1);
    bool branch = false;
    for (const auto& e : t.events) branch = branch || e.kind == EventKind::Branch;
    CHECK(branch);
}

TEST_CASE("event descriptions follow the narration of a reference creation") {
    auto t = test::run_sample("example2_alias_mutation.mjv");
    const auto& e = event_after(t, "'ref_p'");
    CHECK(e.kind == EventKind::Decl);
    CHECK(e.description.find("Create") != std::string::npos);
}
