#include "vps/cli/app.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "vps/cli/http.hpp"
#include "vps/cli/session.hpp"
#include "vps/feedback/compare.hpp"
#include "vps/feedback/vpsd.hpp"
#include "vps/lang/ast_json.hpp"
#include "vps/lang/validator.hpp"

namespace vps::cli {

namespace {

/// Ends a command early with an exit code; the message is already printed.
struct Abort {
    int code;
};

std::string read_file(const std::string& path, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        err << "vps: cannot read '" << path << "': " << std::strerror(errno) << "\n";
        throw Abort{kExitEnvError};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        err << "vps: error while reading '" << path << "'\n";
        throw Abort{kExitEnvError};
    }
    return buf.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err) {
    if (path.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (file) file << text;
    if (!file) {
        err << "vps: cannot write '" << path << "': " << std::strerror(errno) << "\n";
        throw Abort{kExitEnvError};
    }
}

/// Compiles the program, printing every problem as FILE:LINE:COL: what.
lang::CheckedProgram load_program(const std::string& path, std::ostream& out, std::ostream& err) {
    std::string source = read_file(path, err);
    try {
        return lang::compile(source);
    } catch (const lang::PositionedError& e) {
        out << path << ":" << e.pos().line << ":" << e.pos().column << ": syntax error: " << e.message() << "\n";
    } catch (const lang::ValidationFailed& e) {
        for (const auto& v : e.errors()) {
            out << path << ":" << v.pos.line << ":" << v.pos.column << ": " << lang::to_string(v.category) << ": "
                << v.message << "\n";
        }
    }
    throw Abort{kExitUserError};
}

std::size_t max_steps(const std::string& flag, std::ostream& err) {
    try {
        return resolve_max_steps(flag.empty() ? nullptr : &flag);
    } catch (const std::invalid_argument& e) {
        err << "vps: " << e.what() << "\n";
        throw Abort{kExitUserError};
    }
}

std::size_t step_of(const Session& s, const std::string& text, std::ostream& err) {
    try {
        return parse_step(text, s.trace().events.size());
    } catch (const std::invalid_argument& e) {
        err << "vps: " << e.what() << "\n";
        throw Abort{kExitUserError};
    }
}

struct Options {
    std::string file;
    std::string output;
    std::string maxSteps;
    std::string step;
    std::string format = "svg";
    std::string answer;
    std::string uiDir;
    std::string host = "127.0.0.1";
    int port = 7470;
};

int cmd_parse(const Options& o, std::ostream& out, std::ostream& err) {
    auto program = load_program(o.file, out, err);
    out << lang::ast_to_json(program);
    return kExitOk;
}

int cmd_trace(const Options& o, std::ostream& out, std::ostream& err) {
    std::size_t budget = max_steps(o.maxSteps, err);
    Session session(load_program(o.file, err, err), budget);
    write_output(o.output, session.trace_json(), out, err);
    return kExitOk;
}

int cmd_render(const Options& o, std::ostream& out, std::ostream& err) {
    Format format;
    try {
        format = parse_format(o.format);
    } catch (const std::invalid_argument& e) {
        err << "vps: " << e.what() << "\n";
        return kExitUserError;
    }
    std::size_t budget = max_steps(o.maxSteps, err);
    Session session(load_program(o.file, err, err), budget);
    std::size_t k = step_of(session, o.step, err);
    write_output(o.output, session.render(k, format), out, err);
    return kExitOk;
}

int cmd_grade(const Options& o, std::ostream& out, std::ostream& err) {
    std::size_t budget = max_steps(o.maxSteps, err);
    Session session(load_program(o.file, err, err), budget);
    std::size_t k = step_of(session, o.step, err);
    std::string text = read_file(o.answer, err);
    diagram::Diagram answer;
    try {
        answer = feedback::parse_vpsd(text);
    } catch (const feedback::VpsdError& e) {
        err << o.answer << ":" << e.line() << ": " << e.message() << "\n";
        return kExitUserError;
    }
    auto report = feedback::compare(diagram::state_to_diagram(session.trace().events[k].state), answer);
    out << feedback::report_to_json(report);
    return report.equivalent ? kExitOk : kExitNotEquivalent;
}

int cmd_serve(const Options& o, std::ostream&, std::ostream& err) {
    std::optional<std::string> ui;
    if (!o.uiDir.empty()) {
        std::error_code ec;
        if (!std::filesystem::is_directory(o.uiDir, ec)) {
            err << "vps: UI directory '" << o.uiDir << "' does not exist\n";
            return kExitEnvError;
        }
        ui = o.uiDir;
    }
    std::size_t budget = max_steps(o.maxSteps, err);
    Session session(load_program(o.file, err, err), budget);
    HttpService service(session, ui);
    if (!service.bind(o.host, o.port)) {
        err << "vps: cannot listen on " << o.host << ":" << o.port << " (port busy or not permitted)\n";
        return kExitEnvError;
    }
    err << "vps: serving " << o.file << " on http://" << o.host << ":" << service.port() << "/\n";
    err.flush();
    return service.listen() ? kExitOk : kExitEnvError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Step through MiniJava programs as box-and-arrow memory diagrams.", "vps"};
    app.require_subcommand(1);
    Options o;

    auto* parse = app.add_subcommand("parse", "Check a program and print its syntax tree as JSON");
    parse->add_option("FILE", o.file, "Program source")->required();

    auto* trace = app.add_subcommand("trace", "Run a program and write its trace as JSON");
    trace->add_option("FILE", o.file, "Program source")->required();
    trace->add_option("--max-steps", o.maxSteps, "Step budget (default 10000, or VPS_MAX_STEPS)");
    trace->add_option("-o,--output", o.output, "Output file (default: standard output)");

    auto* render = app.add_subcommand("render", "Draw the memory diagram of one step");
    render->add_option("FILE", o.file, "Program source")->required();
    render->add_option("--step", o.step, "Step index or 'last'")->required();
    render->add_option("--format", o.format, "dot, svg or json")->capture_default_str();
    render->add_option("--max-steps", o.maxSteps, "Step budget");
    render->add_option("-o,--output", o.output, "Output file (default: standard output)");

    auto* grade = app.add_subcommand("grade", "Grade a VPS-D answer against one step");
    grade->add_option("FILE", o.file, "Program source")->required();
    grade->add_option("--step", o.step, "Step index or 'last'")->required();
    grade->add_option("--answer", o.answer, "Answer diagram in VPS-D")->required();
    grade->add_option("--max-steps", o.maxSteps, "Step budget");

    auto* serve = app.add_subcommand("serve", "Serve the trace, diagrams and grading over HTTP");
    serve->add_option("FILE", o.file, "Program source")->required();
    serve->add_option("--port", o.port, "TCP port")->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--host", o.host, "Address to bind")->capture_default_str();
    serve->add_option("--ui-dir", o.uiDir, "Static web UI bundle to serve at /");
    serve->add_option("--max-steps", o.maxSteps, "Step budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUserError;
    }

    try {
        if (parse->parsed()) return cmd_parse(o, out, err);
        if (trace->parsed()) return cmd_trace(o, out, err);
        if (render->parsed()) return cmd_render(o, out, err);
        if (grade->parsed()) return cmd_grade(o, out, err);
        if (serve->parsed()) return cmd_serve(o, out, err);
    } catch (const Abort& a) {
        return a.code;
    } catch (const std::exception& e) {
        err << "vps: internal error: " << e.what() << "\n";
        return kExitEnvError;
    }
    return kExitUserError;
}

}  // namespace vps::cli
