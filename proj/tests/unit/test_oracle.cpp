#include <random>

#include "doctest.h"
#include "straight_line.hpp"
#include "support.hpp"
#include "vps/machine/interpreter.hpp"

using namespace vps;

TEST_CASE("oracle: generated programs match the desk evaluator") {
    std::mt19937 rng(7470);
    int allocating = 0;
    for (int k = 0; k < 250; ++k) {
        auto prog = test::gen::generate(rng);
        REQUIRE(prog.stmts.size() <= 20);
        REQUIRE(prog.allocations <= 10);
        std::string src = test::gen::to_source(prog);
        CAPTURE(src);
        auto trace = test::run_source(src);
        REQUIRE(trace.finalStatus() == machine::Status::Finished);
        auto expected = test::gen::to_machine_state(test::gen::desk_evaluate(prog));
        CHECK(machine::snapshot_equal(trace.events.back().state, expected));
        allocating += prog.allocations > 0 ? 1 : 0;
    }
    CHECK(allocating > 150);
}

TEST_CASE("oracle: a hand-written program") {
    using namespace test::gen;
    auto lit = [](std::int32_t v) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::IntLit;
        e->i = v;
        return ExprPtr(e);
    };
    auto str = [](std::string v) {
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::StrLit;
        e->s = std::move(v);
        return ExprPtr(e);
    };
    auto person = std::make_shared<Expr>();
    person->kind = Expr::Kind::NewPerson;
    person->args = {str("234"), lit(56)};
    Program p;
    Stmt decl;
    decl.kind = Stmt::Kind::Decl;
    decl.type = Ty::Person;
    decl.name = "ref_p";
    decl.value = person;
    p.stmts.push_back(decl);
    Stmt set;
    set.kind = Stmt::Kind::AssignField;
    set.name = "ref_p";
    set.field = "rut";
    set.value = str("000");
    p.stmts.push_back(set);

    OState s = desk_evaluate(p);
    REQUIRE(s.heap.size() == 1);
    CHECK(s.heap[0].slots[0].second.s == "000");
    CHECK(s.heap[0].slots[1].second.i == 56);
    auto trace = test::run_source(to_source(p));
    CHECK(machine::snapshot_equal(trace.events.back().state, to_machine_state(s)));
}
