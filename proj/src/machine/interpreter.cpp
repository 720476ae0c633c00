#include "vps/machine/interpreter.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vps/lang/printer.hpp"
#include "vps/text.hpp"

namespace vps::machine {

using lang::BaseType;
using lang::Expr;
using lang::ExprKind;
using lang::Stmt;
using lang::StmtKind;
using lang::TypeRef;

std::string_view to_string(EventKind kind) {
    switch (kind) {
    case EventKind::Decl: return "decl";
    case EventKind::Assign: return "assign";
    case EventKind::Call: return "call";
    case EventKind::Return: return "return";
    case EventKind::Print: return "print";
    case EventKind::Branch: return "branch";
    case EventKind::Alloc: return "alloc";
    case EventKind::Halt: return "halt";
    }
    return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
    for (auto k : {EventKind::Decl, EventKind::Assign, EventKind::Call, EventKind::Return, EventKind::Print,
                   EventKind::Branch, EventKind::Alloc, EventKind::Halt}) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::string display(const Value& v, const Heap& heap) {
    struct Visitor {
        const Heap& heap;
        std::string operator()(std::int32_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return text::format_double(d); }
        std::string operator()(bool b) const { return b ? "true" : "false"; }
        std::string operator()(char16_t c) const { return text::utf16_unit_to_utf8(c); }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(NullV) const { return "null"; }
        std::string operator()(RefV r) const {
            if (!heap.contains(r.id)) return "@" + std::to_string(r.id);
            const HeapNode& n = heap.at(r.id);
            std::string title = std::holds_alternative<ArrayNode>(n)
                                    ? std::get<ArrayNode>(n).elemType + "[]"
                                    : std::get<ObjectNode>(n).className;
            return title + "@" + std::to_string(r.id);
        }
    };
    return std::visit(Visitor{heap}, v);
}

namespace {

constexpr std::size_t kMaxFrames = 256;

Value default_value(const TypeRef& t) {
    if (t.is_reference()) return NullV{};
    switch (t.base) {
    case BaseType::Int: return std::int32_t{0};
    case BaseType::Double: return 0.0;
    case BaseType::Boolean: return false;
    case BaseType::Char: return char16_t{0};
    case BaseType::String: return std::string{};
    default: return NullV{};
    }
}

std::int32_t as_int(const Value& v) {
    if (const auto* c = std::get_if<char16_t>(&v)) return static_cast<std::int32_t>(*c);
    return std::get<std::int32_t>(v);
}

double as_double(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return static_cast<double>(as_int(v));
}

// Implicit widening on assignment, parameter passing and return.
Value coerce(Value v, const TypeRef& to) {
    if (to.array) return v;
    if (to.base == BaseType::Double && !std::holds_alternative<double>(v) &&
        (std::holds_alternative<std::int32_t>(v) || std::holds_alternative<char16_t>(v))) {
        return as_double(v);
    }
    if (to.base == BaseType::Int && std::holds_alternative<char16_t>(v)) return as_int(v);
    return v;
}

std::int32_t wrap(std::int64_t x) { return static_cast<std::int32_t>(static_cast<std::uint32_t>(x)); }

struct Suspend {
    EventKind kind;
    std::string description;
};

struct Fault {
    ErrorKind kind;
    std::string message;
};

std::string describe_value(const Value& v) {
    if (const auto* r = std::get_if<RefV>(&v)) return "memory area @" + std::to_string(r->id);
    return literal(v);
}

class Stepper {
public:
    Stepper(const MachineState& s, const lang::CheckedProgram& prog)
        : prog_(prog), next_(s), fi_(s.frames.size() - 1) {}

    StepResult run() {
        next_.stepIndex = next_.executed;
        ++next_.executed;
        TraceEvent ev;
        try {
            normalize(frame());
            if (at_end(frame())) {
                end_of_body(ev);
            } else {
                const Stmt& s = current(frame());
                ev.line = s.pos.line;
                exec(s, ev);
            }
        } catch (const Suspend& s) {
            ev.kind = s.kind;
            ev.description = s.description;
        } catch (const Fault& f) {
            next_.status = Status::Error;
            next_.errorKind = f.kind;
            next_.error = f.message;
            ev.kind = EventKind::Halt;
            ev.description = f.message;
        }
        next_.nextLine = next_.status == Status::Running ? peek_line(next_.top()) : std::nullopt;
        ev.stepIndex = next_.stepIndex;
        ev.state = std::move(next_);
        return StepResult{std::move(ev), std::move(printed_)};
    }

private:
    Frame& frame() { return next_.frames[fi_]; }

    // -- control flow --------------------------------------------------------

    static bool exhausted(const Cursor& c) { return c.pc >= c.block->stmts.size(); }

    static void normalize(Frame& f) {
        auto& cs = f.control.cursors;
        while (cs.size() > 1 && exhausted(cs.back())) {
            f.bindings.resize(cs.back().scopeMark);
            cs.pop_back();
        }
    }

    static bool at_end(const Frame& f) {
        const auto& cs = f.control.cursors;
        return cs.empty() || (cs.size() == 1 && exhausted(cs.back()));
    }

    static const Stmt& current(const Frame& f) {
        const Cursor& c = f.control.cursors.back();
        return c.block->stmts[c.pc];
    }

    static std::optional<int> peek_line(const Frame& f) {
        const auto& cs = f.control.cursors;
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
            if (!exhausted(*it)) return it->block->stmts[it->pc].pos.line;
        }
        return f.control.body ? std::optional<int>(f.control.body->close.line) : std::nullopt;
    }

    void enter_block(const lang::Block& b) {
        Frame& f = frame();
        f.control.cursors.push_back(Cursor{&b, 0, f.bindings.size()});
    }

    void finish_statement() {
        Frame& f = frame();
        f.control.memo.clear();
        ++f.control.cursors.back().pc;
    }

    // -- statements ----------------------------------------------------------

    void exec(const Stmt& s, TraceEvent& ev) {
        switch (s.kind) {
        case StmtKind::VarDecl: {
            Value v = s.expr ? coerce(eval(*s.expr), s.declType) : default_value(s.declType);
            finish_statement();
            frame().bindings.push_back(Binding{s.name, v});
            ev.kind = EventKind::Decl;
            if (s.declType.is_reference()) {
                ev.description = is_null(v) ? "Create reference '" + s.name + "' with value null."
                                            : "Create reference '" + s.name + "' pointing to " +
                                                  describe_value(v) + allocation_note() + ".";
            } else {
                ev.description = "Create variable '" + s.name + "' with value " + literal(v) + ".";
            }
            break;
        }
        case StmtKind::Assign: {
            Value v = assign(*s.target, *s.expr);
            finish_statement();
            ev.kind = EventKind::Assign;
            std::string target = lang::pretty_print(*s.target);
            if (is_ref(v)) {
                ev.description = "Make '" + target + "' point to " + describe_value(v) + allocation_note() + ".";
            } else {
                ev.description = "Set '" + target + "' to " + literal(v) + ".";
            }
            break;
        }
        case StmtKind::ExprStmt: {
            eval(*s.expr);
            finish_statement();
            if (s.expr->kind == ExprKind::Println) {
                ev.kind = EventKind::Print;
                ev.description = "Print " + text::quote_string(printed_.value_or("")) + ".";
            } else {
                // calls always suspend first; reaching here means it completed on return
                ev.kind = EventKind::Call;
                ev.description = "Finish call to " + s.expr->text + "().";
            }
            break;
        }
        case StmtKind::If: {
            bool cond = std::get<bool>(eval(*s.expr));
            finish_statement();
            ev.kind = EventKind::Branch;
            std::string c = lang::pretty_print(*s.expr);
            if (cond) {
                enter_block(s.blocks[0]);
                ev.description = "Condition (" + c + ") is true: enter the if block.";
            } else if (s.blocks.size() > 1) {
                enter_block(s.blocks[1]);
                ev.description = "Condition (" + c + ") is false: enter the else block.";
            } else {
                ev.description = "Condition (" + c + ") is false: skip the if block.";
            }
            break;
        }
        case StmtKind::While: {
            bool cond = std::get<bool>(eval(*s.expr));
            frame().control.memo.clear();
            ev.kind = EventKind::Branch;
            std::string c = lang::pretty_print(*s.expr);
            if (cond) {
                enter_block(s.blocks[0]);
                ev.description = "Loop condition (" + c + ") is true: run the loop body.";
            } else {
                ++frame().control.cursors.back().pc;
                ev.description = "Loop condition (" + c + ") is false: leave the loop.";
            }
            break;
        }
        case StmtKind::Return: {
            std::optional<Value> v;
            if (s.expr) {
                v = eval(*s.expr);
                if (const auto* m = frame().control.method) v = coerce(*v, m->returnType);
            }
            do_return(v, ev);
            break;
        }
        }
    }

    void end_of_body(TraceEvent& ev) {
        const Frame& f = frame();
        ev.line = f.control.body ? f.control.body->close.line : 0;
        switch (f.control.kind) {
        case FrameKind::Main:
            next_.status = Status::Finished;
            ev.kind = EventKind::Halt;
            ev.description = "Program finished.";
            return;
        case FrameKind::Constructor:
            do_return(std::nullopt, ev);
            return;
        case FrameKind::Method:
            if (!f.control.method || f.control.method->returnType.is_void()) {
                do_return(std::nullopt, ev);
                return;
            }
            throw Fault{ErrorKind::MissingReturn,
                        "MissingReturn: method '" + f.control.method->name + "' ended without returning a value"};
        }
    }

    void do_return(const std::optional<Value>& v, TraceEvent& ev) {
        ev.kind = EventKind::Return;
        Frame& f = frame();
        if (f.control.kind == FrameKind::Main) {
            f.control.cursors.clear();
            f.control.memo.clear();
            ev.description = "Return from main.";
            return;
        }
        Value result = NullV{};
        std::string what;
        if (f.control.kind == FrameKind::Constructor) {
            result = *f.find("this");
            what = "Constructor " + f.label + " finished";
        } else if (v) {
            result = *v;
            what = "Return " + describe_value(*v) + " from " + f.label;
        } else {
            what = "Return from " + f.label;
        }
        next_.frames.pop_back();
        --fi_;
        Frame& caller = frame();
        const int awaited = caller.control.awaiting;
        caller.control.memo[awaited] = result;
        caller.control.awaiting = -1;
        ev.description = what + "; back in " + caller.label + ".";

        // A bare call statement has nothing left to do once its call returns.
        if (!at_end(caller)) {
            const Stmt& pending = current(caller);
            if (pending.kind == StmtKind::ExprStmt && pending.expr->id == awaited) finish_statement();
        }
    }

    std::string allocation_note() const {
        if (allocated_.empty()) return "";
        std::string s = " (new memory area";
        if (allocated_.size() > 1) s += "s";
        for (std::size_t i = 0; i < allocated_.size(); ++i) {
            s += (i == 0 ? " @" : ", @") + std::to_string(allocated_[i]);
        }
        return s + ")";
    }

    // -- heap access ---------------------------------------------------------

    [[noreturn]] static void null_pointer(const std::string& what, const Expr& subject) {
        throw Fault{ErrorKind::NullPointer,
                    "NullPointerException: cannot " + what + " because '" + lang::pretty_print(subject) + "' is null"};
    }

    const ObjectNode& object(std::uint32_t id) const { return std::get<ObjectNode>(next_.heap.at(id)); }
    const ArrayNode& array(std::uint32_t id) const { return std::get<ArrayNode>(next_.heap.at(id)); }

    void set_field(std::uint32_t id, const std::string& field, Value v) {
        ObjectNode node = object(id);
        for (auto& f : node.fields) {
            if (f.name == field) f.value = std::move(v);
        }
        next_.heap.replace(id, std::move(node));
    }

    static std::size_t checked_index(const ArrayNode& arr, std::int32_t idx) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= arr.cells.size()) {
            throw Fault{ErrorKind::IndexOutOfBounds, "ArrayIndexOutOfBoundsException: index " + std::to_string(idx) +
                                                         " out of bounds for length " +
                                                         std::to_string(arr.cells.size())};
        }
        return static_cast<std::size_t>(idx);
    }

    std::uint32_t this_id() { return std::get<RefV>(*frame().find("this")).id; }

    Value assign(const Expr& target, const Expr& value) {
        switch (target.kind) {
        case ExprKind::Name: {
            Value v = coerce(eval(value), target.type);
            if (target.binding == lang::NameBinding::ImplicitField) {
                set_field(this_id(), target.text, v);
                return v;
            }
            auto& bs = frame().bindings;
            for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
                if (it->name == target.text) {
                    it->value = v;
                    break;
                }
            }
            return v;
        }
        case ExprKind::Field: {
            Value recv = eval(target.operands[0]);
            Value v = coerce(eval(value), target.type);
            if (is_null(recv)) null_pointer("assign field '" + target.text + "'", target.operands[0]);
            set_field(std::get<RefV>(recv).id, target.text, v);
            return v;
        }
        case ExprKind::Index: {
            Value recv = eval(target.operands[0]);
            std::int32_t idx = as_int(eval(target.operands[1]));
            Value v = coerce(eval(value), target.type);
            if (is_null(recv)) null_pointer("store to array", target.operands[0]);
            std::uint32_t id = std::get<RefV>(recv).id;
            ArrayNode arr = array(id);
            arr.cells[checked_index(arr, idx)] = v;
            next_.heap.replace(id, std::move(arr));
            return v;
        }
        default:
            throw std::logic_error("not an lvalue");
        }
    }

    // -- expressions ---------------------------------------------------------

    Value eval(const Expr& e) {
        {
            auto& memo = frame().control.memo;
            if (auto it = memo.find(e.id); it != memo.end()) return it->second;
        }
        Value v = compute(e);
        frame().control.memo.emplace(e.id, v);
        return v;
    }

    std::vector<Value> eval_args(const Expr& e, std::size_t from) {
        std::vector<Value> out;
        for (std::size_t i = from; i < e.operands.size(); ++i) out.push_back(eval(e.operands[i]));
        return out;
    }

    [[noreturn]] void push_frame(FrameKind kind, std::string label, const lang::Block& body,
                                 const lang::MethodDecl* method, std::uint32_t self,
                                 const std::vector<lang::Param>& params, std::vector<Value> args, int awaiting,
                                 Suspend why) {
        if (next_.frames.size() >= kMaxFrames) {
            throw Fault{ErrorKind::StackOverflow,
                        "StackOverflowError: more than " + std::to_string(kMaxFrames) + " nested calls"};
        }
        Frame f;
        f.label = std::move(label);
        f.bindings.push_back(Binding{"this", RefV{self}});
        for (std::size_t i = 0; i < params.size(); ++i) {
            f.bindings.push_back(Binding{params[i].name, coerce(std::move(args[i]), params[i].type)});
        }
        f.control.kind = kind;
        f.control.body = &body;
        f.control.method = method;
        f.control.cursors.push_back(Cursor{&body, 0, f.bindings.size()});
        frame().control.awaiting = awaiting;
        next_.frames.push_back(std::move(f));
        throw why;
    }

    Value compute(const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: return wrap(e.intValue);
        case ExprKind::DoubleLit: return e.doubleValue;
        case ExprKind::BoolLit: return e.boolValue;
        case ExprKind::CharLit: return e.charValue;
        case ExprKind::StringLit: return e.text;
        case ExprKind::Null: return NullV{};
        case ExprKind::This: return *frame().find("this");
        case ExprKind::Name:
            if (e.binding == lang::NameBinding::ImplicitField) return *object(this_id()).find(e.text);
            return *frame().find(e.text);
        case ExprKind::Field: {
            Value recv = eval(e.operands[0]);
            bool on_array = e.operands[0].type.array;
            if (is_null(recv)) {
                null_pointer(on_array ? std::string("read the array length") : "read field '" + e.text + "'",
                             e.operands[0]);
            }
            std::uint32_t id = std::get<RefV>(recv).id;
            if (on_array) return static_cast<std::int32_t>(array(id).cells.size());
            return *object(id).find(e.text);
        }
        case ExprKind::Index: {
            Value recv = eval(e.operands[0]);
            std::int32_t idx = as_int(eval(e.operands[1]));
            if (is_null(recv)) null_pointer("load from array", e.operands[0]);
            const ArrayNode& arr = array(std::get<RefV>(recv).id);
            return arr.cells[checked_index(arr, idx)];
        }
        case ExprKind::Call: {
            Value recv = eval(e.operands[0]);
            std::vector<Value> args = eval_args(e, 1);
            if (is_null(recv)) null_pointer("invoke '" + e.text + "()'", e.operands[0]);
            std::uint32_t id = std::get<RefV>(recv).id;
            const auto* c = prog_.find_class(object(id).className);
            const auto* m = c->find_method(e.text);
            push_frame(FrameKind::Method, c->name + "." + m->name, m->body, m, id, m->params, std::move(args),
                       e.id,
                       Suspend{EventKind::Call, "Call " + m->name + "() on the object at memory area @" +
                                                    std::to_string(id) + "."});
        }
        case ExprKind::NewObject: {
            std::vector<Value> args = eval_args(e, 0);
            const auto* c = prog_.find_class(e.text);
            ObjectNode node{c->name, {}};
            for (const auto& f : c->fields) node.fields.push_back(Binding{f.name, default_value(f.type)});
            std::uint32_t id = next_.heap.allocate(std::move(node));
            allocated_.push_back(id);
            const auto* ctor = c->ctor();
            if (!ctor) return RefV{id};
            push_frame(FrameKind::Constructor, c->name + "." + c->name, ctor->body, nullptr, id, ctor->params,
                       std::move(args), e.id,
                       Suspend{EventKind::Alloc, "Allocate a " + c->name + " object at memory area @" +
                                                     std::to_string(id) + " and run its constructor."});
        }
        case ExprKind::NewArray: {
            std::int32_t len = as_int(eval(e.operands[0]));
            if (len < 0) {
                throw Fault{ErrorKind::NegativeArraySize, "NegativeArraySizeException: " + std::to_string(len)};
            }
            ArrayNode node{lang::to_string(e.newType), {}};
            node.cells.assign(static_cast<std::size_t>(len), default_value(e.newType));
            std::uint32_t id = next_.heap.allocate(std::move(node));
            allocated_.push_back(id);
            return RefV{id};
        }
        case ExprKind::Unary: {
            Value x = eval(e.operands[0]);
            if (e.text == "!") return !std::get<bool>(x);
            if (e.type.base == BaseType::Double) return -as_double(x);
            return wrap(-static_cast<std::int64_t>(as_int(x)));
        }
        case ExprKind::Binary: return binary(e);
        case ExprKind::Println: {
            Value v = eval(e.operands[0]);
            printed_ = display(v, next_.heap);
            return NullV{};
        }
        }
        throw std::logic_error("unhandled expression");
    }

    Value binary(const Expr& e) {
        const std::string& op = e.text;
        if (op == "&&" || op == "||") {
            bool l = std::get<bool>(eval(e.operands[0]));
            if (op == "&&" ? !l : l) return l;
            return std::get<bool>(eval(e.operands[1]));
        }
        Value l = eval(e.operands[0]);
        Value r = eval(e.operands[1]);
        const TypeRef& lt = e.operands[0].type;
        const TypeRef& rt = e.operands[1].type;

        if (op == "+" && e.type.base == BaseType::String && !e.type.array) {
            return display(l, next_.heap) + display(r, next_.heap);
        }
        if (op == "==" || op == "!=") {
            bool eq;
            if (lt.is_numeric() && rt.is_numeric()) {
                eq = (lt.base == BaseType::Double || rt.base == BaseType::Double) ? as_double(l) == as_double(r)
                                                                                   : as_int(l) == as_int(r);
            } else {
                eq = l == r;
            }
            return op == "==" ? eq : !eq;
        }
        bool floating = lt.base == BaseType::Double || rt.base == BaseType::Double;
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            double a = as_double(l), b = as_double(r);
            if (!floating) {
                std::int32_t x = as_int(l), y = as_int(r);
                return op == "<" ? x < y : op == "<=" ? x <= y : op == ">" ? x > y : x >= y;
            }
            return op == "<" ? a < b : op == "<=" ? a <= b : op == ">" ? a > b : a >= b;
        }
        if (floating) {
            double a = as_double(l), b = as_double(r);
            if (op == "+") return a + b;
            if (op == "-") return a - b;
            if (op == "*") return a * b;
            if (op == "/") return a / b;
            return std::fmod(a, b);
        }
        std::int64_t a = as_int(l), b = as_int(r);
        if (op == "+") return wrap(a + b);
        if (op == "-") return wrap(a - b);
        if (op == "*") return wrap(a * b);
        if (b == 0) throw Fault{ErrorKind::DivisionByZero, "ArithmeticException: / by zero"};
        if (op == "/") return wrap(a / b);
        return wrap(a % b);
    }

    const lang::CheckedProgram& prog_;
    MachineState next_;
    std::size_t fi_;
    std::vector<std::uint32_t> allocated_;
    std::optional<std::string> printed_;
};

}  // namespace

MachineState init_machine(const lang::CheckedProgram& program) {
    MachineState s;
    Frame main;
    main.label = "main";
    main.control.kind = FrameKind::Main;
    main.control.body = &program.main().body;
    main.control.cursors.push_back(Cursor{&program.main().body, 0, 0});
    s.frames.push_back(std::move(main));
    const auto& stmts = program.main().body.stmts;
    if (stmts.empty()) {
        s.status = Status::Finished;
    } else {
        s.nextLine = stmts.front().pos.line;
    }
    return s;
}

StepResult step(const MachineState& state, const lang::CheckedProgram& program) {
    if (state.status != Status::Running) throw std::logic_error("step: machine is not running");
    return Stepper(state, program).run();
}

Trace run_to_end(const lang::CheckedProgram& program, std::size_t maxSteps) {
    if (maxSteps == 0) throw std::invalid_argument("maxSteps must be at least 1");
    Trace trace;
    trace.sourceText = program.source();
    trace.programName = program.name();

    MachineState state = init_machine(program);
    if (state.status != Status::Running) {
        TraceEvent halt;
        halt.line = program.main().body.close.line;
        halt.kind = EventKind::Halt;
        halt.description = "Program finished.";
        halt.state = state;
        trace.events.push_back(std::move(halt));
        return trace;
    }
    while (true) {
        StepResult r = step(state, program);
        if (r.printed) trace.output.push_back(*r.printed);
        if (trace.events.size() + 1 == maxSteps && r.event.state.status == Status::Running) {
            auto& s = r.event.state;
            s.status = Status::Error;
            s.errorKind = ErrorKind::StepBudget;
            s.error = "step budget exceeded";
            s.nextLine.reset();
            r.event.kind = EventKind::Halt;
            r.event.description += " Stopped: step budget exceeded after " + std::to_string(maxSteps) + " steps.";
        }
        state = r.event.state;
        trace.events.push_back(std::move(r.event));
        if (state.status != Status::Running) break;
    }
    return trace;
}

}  // namespace vps::machine
