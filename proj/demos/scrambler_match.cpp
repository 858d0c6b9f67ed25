// Longest stretch of the SONET scrambler output that is also valid 4B/5B.

#include <cstdio>

#include "fddi/scrambler.hpp"

int main(int argc, char** argv) {
  const auto table = fddi::phy::CodeTable::load(argc > 1 ? argv[1] : FDDI_DATA_DIR "/fddi_4b5b.tbl");
  const auto report = fddi::sonet::longest_valid_match(table);
  for (const auto* m : {&report.whole_symbol, &report.with_fragments}) {
    std::printf("%zu bits at offset %zu (%s)\n  %s\n", m->length_bits, m->offset,
                m->complement ? "complemented" : "true polarity", fddi::sonet::describe_witness(*m).c_str());
  }
}
