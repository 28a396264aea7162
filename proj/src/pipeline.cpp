#include <cstdio>

#include "dinolite/optimizer.hpp"

namespace dinolite {

std::string OptReport::tsv() const {
    std::string s = "function\tinstrs-before\tinstrs-after\tspecialized\tcombined\tinlined\n";
    for (const OptUnitRow& row : units) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s\t%d\t%d\t%d\t%d\t%d\n", row.name.c_str(),
                      row.instrs_before, row.instrs_after, row.specialized, row.combined,
                      row.inlined);
        s += buf;
    }
    return s;
}

OptReport optimize(Program& prog, const OptFlags& flags) {
    OptReport report;
    if (!prog.is_rtl) return report; // the stack form stays as compiled

    report.units.resize(prog.units.size());
    for (size_t i = 0; i < prog.units.size(); ++i) {
        report.units[i].name = prog.units[i].name;
        report.units[i].instrs_before = (int)prog.units[i].rtl.size();
    }

    if (flags.inline_calls) {
        std::vector<int> per_unit;
        report.inlined_calls = inline_calls(prog, flags.inline_limit, &per_unit);
        for (size_t i = 0; i < per_unit.size(); ++i) report.units[i].inlined = per_unit[i];
    }
    if (flags.combine) {
        for (size_t i = 0; i < prog.units.size(); ++i) {
            CombineStats s = combine_unit(prog.units[i]);
            report.combined_cmp_branch += s.cmp_branch;
            report.combined_inc_branch += s.inc_branch;
            report.units[i].combined = s.cmp_branch + s.inc_branch;
        }
    }
    if (flags.specialize) {
        for (size_t i = 0; i < prog.units.size(); ++i) {
            int n = specialize_unit(prog.units[i]);
            report.specialized_ops += n;
            report.units[i].specialized = n;
        }
    }
    for (size_t i = 0; i < prog.units.size(); ++i) {
        report.units[i].instrs_after = (int)prog.units[i].rtl.size();
    }
    validate(prog);
    return report;
}

} // namespace dinolite
