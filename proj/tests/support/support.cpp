#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vps/lang/validator.hpp"

namespace vps::test {

std::string sample_path(const std::string& name) { return std::string(VPS_SAMPLES_DIR) + "/" + name; }

std::string read_sample(const std::string& name) {
    std::ifstream in(sample_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing sample " + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

lang::CheckedProgram compile_sample(const std::string& name) { return lang::compile(read_sample(name)); }

machine::Trace run_sample(const std::string& name, std::size_t maxSteps) {
    return machine::run_to_end(compile_sample(name), maxSteps);
}

machine::Trace run_source(const std::string& source, std::size_t maxSteps) {
    return machine::run_to_end(lang::compile(source), maxSteps);
}

std::string main_only(const std::string& body) {
    return "class Main {\n    public static void main(String[] args) {\n" + body + "\n    }\n}\n";
}

const std::vector<std::string>& sample_programs() {
    static const std::vector<std::string> kNames = {
        "example1_int_array.mjv", "person.mjv",      "example2_alias_mutation.mjv", "array_of_persons.mjv",
        "friends.mjv",            "linked_list.mjv", "infinite_loop.mjv",           "out_of_bounds.mjv",
        "null_dereference.mjv",
    };
    return kNames;
}

}  // namespace vps::test
