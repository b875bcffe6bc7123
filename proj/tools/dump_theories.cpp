// Regenerates theories/stt.lpm and theories/coc.lpm from the built-ins.
#include <fstream>
#include <iostream>
#include <string>

#include "lpm/syntax.hpp"
#include "lpm/theories.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: dump_theories OUTPUT_DIR\n";
        return 2;
    }
    for (auto id : {lpm::TheoryId::Stt, lpm::TheoryId::Coc}) {
        std::string path = std::string(argv[1]) + "/" + std::string(lpm::short_name(id)) + ".lpm";
        std::ofstream out(path, std::ios::binary);
        out << lpm::print_entries(lpm::builtin_theory(id)->entries());
        if (!out) {
            std::cerr << path << ": cannot write\n";
            return 1;
        }
    }
    return 0;
}
