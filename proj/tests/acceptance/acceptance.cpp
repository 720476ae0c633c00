// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "straight_line.hpp"
#include "support.hpp"
#include "vps/cli/app.hpp"
#include "vps/diagram/diagram.hpp"
#include "vps/diagram/emit.hpp"
#include "vps/diagram/trace_json.hpp"
#include "vps/feedback/compare.hpp"
#include "vps/feedback/vpsd.hpp"
#include "vps/machine/interpreter.hpp"
#include "vps/machine/path.hpp"

using namespace vps;
using diagram::Diagram;
using diagram::Slot;

namespace {

/// Thrown by expect() with a description of the first failed condition.
struct Failed {
    std::string why;
};

void expect(bool ok, const std::string& why) {
    if (!ok) throw Failed{why};
}

bool same_value(const machine::Value& a, const machine::Value& b) { return machine::value_equal(a, b); }

machine::MachineState final_state(const machine::Trace& t) { return t.events.back().state; }

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"vps"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto at = hay.find(needle); at != std::string::npos; at = hay.find(needle, at + needle.size())) ++n;
    return n;
}

void example1_fidelity() {
    const auto s = final_state(test::run_sample("example1_int_array.mjv"));
    expect(s.status == machine::Status::Finished, "program did not finish");
    expect(s.frames.size() == 1 && s.frames[0].bindings.size() == 2, "expected one frame with two bindings");
    for (const auto& b : s.frames[0].bindings) {
        expect(b.value == machine::Value(machine::RefV{1}), b.name + " does not reference node 1");
    }
    expect(s.heap.size() == 1, "heap should hold one node");
    const auto* arr = std::get_if<machine::ArrayNode>(&s.heap.at(1));
    expect(arr && arr->elemType == "int" && arr->cells.size() == 5, "node 1 is not int[5]");
    for (const auto& c : arr->cells) expect(c == machine::Value(std::int32_t{0}), "non-zero cell");
    for (int i = 0; i < 5; ++i) {
        std::string k = "[" + std::to_string(i) + "]";
        expect(same_value(machine::read_path(s, "array_enteros" + k), machine::read_path(s, "ref" + k)),
               "paths differ at index " + std::to_string(i));
    }
}

void example2_aliasing() {
    const auto s = final_state(test::run_sample("example2_alias_mutation.mjv"));
    expect(machine::read_path(s, "ref_p.rut") == machine::Value(std::string("000")), "ref_p.rut is not \"000\"");
    expect(machine::read_path(s, "ref_p.edad") == machine::Value(std::int32_t{56}), "ref_p.edad is not 56");
    std::string svg = diagram::emit_svg(diagram::state_to_diagram(s));
    expect(svg.find(R"(>rut = "000"</text>)") != std::string::npos, "svg lacks the rut row");
    expect(svg.find(">edad = 56</text>") != std::string::npos, "svg lacks the edad row");
}

void array_of_objects() {
    auto t = test::run_sample("array_of_persons.mjv");
    const auto s = final_state(t);
    auto first = machine::read_path(s, "array_personas[0]");
    const auto* ref = std::get_if<machine::RefV>(&first);
    expect(ref != nullptr, "array_personas[0] is not a reference");
    const auto* person = std::get_if<machine::ObjectNode>(&s.heap.at(ref->id));
    expect(person && person->className == "Person", "array_personas[0] is not a Person");
    expect(machine::read_path(s, "array_personas[0].rut") == machine::Value(std::string("000")), "wrong rut");
    expect(machine::read_path(s, "array_personas[0].edad") == machine::Value(std::int32_t{56}), "wrong edad");

    // The snapshot right after the array exists, before any cell is assigned.
    const machine::MachineState* fresh = nullptr;
    for (const auto& e : t.events) {
        if (e.state.frames.size() == 1 && e.state.heap.size() == 1) {
            fresh = &e.state;
            break;
        }
    }
    expect(fresh != nullptr, "no snapshot with only the array allocated");
    Diagram d = diagram::state_to_diagram(*fresh);
    const auto& arr = d.nodes.at(0);
    expect(arr.rows.size() == 2, "array should have two cells");
    for (const auto& r : arr.rows) expect(r.slot == Slot::null(), "unassigned cell is not null");
    for (const auto& e : d.edges) expect(e.fromRoot, "a null cell produced an edge");
    std::string svg = diagram::emit_svg(d);
    expect(count_of(svg, "class=\"edge\"") == 1, "svg should draw only the root arrow");
    expect(count_of(svg, "] = null</text>") == 2, "svg should show two null cells");
}

void friends_structure() {
    const auto s = final_state(test::run_sample("friends.mjv"));
    expect(s.heap.size() == 3, "heap does not have exactly 3 nodes");
    expect(same_value(machine::read_path(s, "a1.p1"), machine::read_path(s, "ref_p1")), "p1 target differs");
    expect(same_value(machine::read_path(s, "a1.p2"), machine::read_path(s, "ref_p2")), "p2 target differs");
    expect(diagram::state_to_diagram(s).edges.size() == 5, "diagram does not have exactly 5 edges");
}

void renaming_property() {
    std::mt19937 rng(4242);
    int checked = 0;
    for (; checked < 100; ++checked) {
        auto prog = test::gen::generate(rng);
        expect(prog.allocations <= 10, "generator exceeded the allocation cap");
        Diagram d = diagram::state_to_diagram(final_state(test::run_source(test::gen::to_source(prog))));
        std::vector<std::string> fresh;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) fresh.push_back("@r" + std::to_string(i));
        std::shuffle(fresh.begin(), fresh.end(), rng);
        std::map<std::string, std::string> mapping;
        for (std::size_t i = 0; i < d.nodes.size(); ++i) mapping[d.nodes[i].label] = fresh[i];
        Diagram renamed = diagram::rename(d, mapping);
        std::shuffle(renamed.nodes.begin(), renamed.nodes.end(), rng);
        diagram::rebuild_edges(renamed);
        auto r = feedback::compare(d, renamed);
        expect(r.equivalent && r.score == 1.0 && r.discrepancies.empty(),
               "renamed diagram not equivalent for program " + std::to_string(checked));
    }
}

void oracle_equivalence() {
    std::mt19937 rng(20240);
    for (int k = 0; k < 200; ++k) {
        auto prog = test::gen::generate(rng);
        expect(prog.stmts.size() <= 20, "generator exceeded the statement cap");
        auto t = test::run_source(test::gen::to_source(prog));
        auto expected = test::gen::to_machine_state(test::gen::desk_evaluate(prog));
        expect(machine::snapshot_equal(final_state(t), expected), "program " + std::to_string(k) + " disagrees");
    }
}

void determinism() {
    for (const auto& name : test::sample_programs()) {
        auto once = [&] {
            auto t = test::run_sample(name);
            std::string out = diagram::emit_trace_json(t);
            for (const auto& e : t.events) {
                Diagram d = diagram::state_to_diagram(e.state);
                out += diagram::emit_dot(d);
                out += diagram::emit_svg(d);
            }
            return out;
        };
        expect(once() == once(), name + " is not byte-identical across runs");
    }
}

void grading_discrimination() {
    struct Case {
        std::string program;
        std::string answer;
        std::optional<feedback::DiscrepancyKind> kind;  // nullopt: correct answer
    };
    const std::vector<Case> cases = {
        {"example1_int_array.mjv", "example1_final.vpsd", std::nullopt},
        {"example2_alias_mutation.mjv", "example2_final.vpsd", std::nullopt},
        {"friends.mjv", "friends_final.vpsd", std::nullopt},
        {"example2_alias_mutation.mjv", "example2_wrong_value.vpsd", feedback::DiscrepancyKind::WrongPrimitiveValue},
        {"friends.mjv", "friends_swapped_alias.vpsd", feedback::DiscrepancyKind::BrokenAliasing},
        {"friends.mjv", "friends_extra_node.vpsd", feedback::DiscrepancyKind::ExtraNode},
    };
    for (const auto& c : cases) {
        std::string answerPath = test::sample_path("answers/" + c.answer);
        int code = run_cli({"grade", test::sample_path(c.program), "--step", "last", "--answer", answerPath});
        expect(code == (c.kind ? 1 : 0), c.answer + " exit code " + std::to_string(code));
        auto report = feedback::compare(diagram::state_to_diagram(final_state(test::run_sample(c.program))),
                                        feedback::parse_vpsd(test::read_sample("answers/" + c.answer)));
        if (c.kind) {
            expect(report.discrepancies.size() == 1 && report.discrepancies[0].kind == *c.kind,
                   c.answer + " does not yield exactly " + std::string(feedback::to_string(*c.kind)));
        } else {
            expect(report.equivalent, c.answer + " is not graded equivalent");
        }
    }
}

void budget_and_errors() {
    const std::size_t budget = 200;
    auto loop = test::run_sample("infinite_loop.mjv", budget);
    expect(loop.events.size() == budget, "infinite loop did not stop at the budget");
    const auto last = final_state(loop);
    expect(last.status == machine::Status::Error && last.error == "step budget exceeded",
           "budget overrun not reported");
    expect(last.errorKind == machine::ErrorKind::StepBudget, "wrong error kind for the budget");

    const auto oob = final_state(test::run_sample("out_of_bounds.mjv"));
    expect(oob.status == machine::Status::Error && oob.errorKind == machine::ErrorKind::IndexOutOfBounds,
           "out_of_bounds.mjv did not end with IndexOutOfBounds");
    const auto npe = final_state(test::run_sample("null_dereference.mjv"));
    expect(npe.status == machine::Status::Error && npe.errorKind == machine::ErrorKind::NullPointer,
           "null_dereference.mjv did not end with NullPointer");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"example 1 fidelity", example1_fidelity},
        {"example 2 aliasing", example2_aliasing},
        {"array of objects", array_of_objects},
        {"friends structure", friends_structure},
        {"renaming property (100 programs)", renaming_property},
        {"oracle equivalence (200 programs)", oracle_equivalence},
        {"determinism of trace json, dot and svg", determinism},
        {"grading discrimination", grading_discrimination},
        {"budget and runtime errors", budget_and_errors},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            check();
        } catch (const Failed& f) {
            ok = false;
            detail = f.why;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
        std::cout << (ok ? "PASS" : "FAIL") << "  " << name << " (" << ms << " ms)";
        if (!ok) std::cout << ": " << detail;
        std::cout << "\n";
        failures += ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
