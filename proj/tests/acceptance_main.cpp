// Acceptance gate: one check per release criterion, each printing a single
// PASS/FAIL line with the measured numbers next to the required bound.
// Exits nonzero when any check fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dinolite/bc_text.hpp"
#include "dinolite/bench.hpp"
#include "dinolite/cfg.hpp"
#include "dinolite/collections.hpp"
#include "dinolite/driver.hpp"
#include "dinolite/hash.hpp"
#include "dinolite/infer.hpp"
#include "dinolite/vm.hpp"

using namespace dinolite;

namespace {

int g_failures = 0;

void report(int idx, bool ok, const std::string& detail) {
    std::printf("[%2d] %s  %s\n", idx, ok ? "PASS" : "FAIL", detail.c_str());
    if (!ok) g_failures++;
}

std::string bench_path(const std::string& name) {
    return std::string(DINOLITE_BENCH_DIR) + "/" + name;
}

struct Outcome {
    int exit_code = 0;
    std::string out;
    ExitReport report;
};

Outcome run(const Program& prog, const std::vector<std::string>& argv, bool memoize = true,
            bool profile = false, bool record = false) {
    RunOptions ro;
    ro.memoize = memoize;
    ro.profile = profile;
    ro.record_types = record;
    ro.argv = argv;
    std::ostringstream sink;
    Outcome o;
    o.report = run_program(prog, ro, sink);
    o.exit_code = o.report.exit_code;
    o.out = sink.str();
    return o;
}

Outcome run_file(const std::string& name, const std::vector<std::string>& argv,
                 CompileOptions copts, bool memoize = true, bool profile = false,
                 bool record = false) {
    CompileOutput c = load_program(bench_path(name), copts);
    return run(c.program, argv, memoize, profile, record);
}

CompileOptions opts(bool combine, bool specialize, bool inl, VmKind vm = VmKind::Rtl) {
    CompileOptions o;
    o.vm = vm;
    o.opt.combine = combine;
    o.opt.specialize = specialize;
    o.opt.inline_calls = inl;
    return o;
}

struct CorpusEntry {
    const char* file;
    std::vector<std::string> argv;
};

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> k = {
        {"loop.dl", {"6"}},   {"empty_loop.dl", {}}, {"sieve.dl", {}},
        {"fib.dl", {"20"}},   {"fact.dl", {}},       {"hash.dl", {"3000"}},
        {"sort.dl", {"400"}}, {"method.dl", {"50000"}},
    };
    return k;
}

char buf[512];

// ---- 1 & 2: the optimization ladder, wall clock and dispatch counts ----

void criteria_ladder() {
    auto t0 = std::chrono::steady_clock::now();
    std::string src = read_file(bench_path("loop.dl"));
    std::vector<LadderRow> rows = bench_ladder(src, "loop.dl", {"18"}, 3);
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool ran = rows.size() == 5;
    for (const LadderRow& r : rows) ran = ran && !r.failed && r.min_seconds > 0;
    if (!ran) {
        report(1, false, "ladder failed to produce 5 timed rows");
        report(2, false, "ladder failed to produce 5 timed rows");
        return;
    }

    double r_stack = rows[0].min_seconds / rows[1].min_seconds;
    double r_combine = rows[1].min_seconds / rows[2].min_seconds;
    double r_spec = rows[2].min_seconds / rows[3].min_seconds;
    bool ok1 = r_stack >= 1.8 && r_combine >= 1.15 && r_spec >= 1.2 && total < 60.0;
    std::snprintf(buf, sizeof buf,
                  "wall ladder on loop.dl 18: stack/rtl=%.2f (>=1.8), rtl/combine=%.2f (>=1.15), "
                  "combine/specialize=%.2f (>=1.2), total=%.1fs (<60)",
                  r_stack, r_combine, r_spec, total);
    report(1, ok1, buf);

    double c_ratio = double(rows[0].dispatched) / double(rows[1].dispatched);
    bool ok2 = rows[0].dispatched > rows[1].dispatched && rows[1].dispatched > rows[2].dispatched &&
               c_ratio >= 2.5;
    std::snprintf(buf, sizeof buf,
                  "dispatch ladder: stack=%llu > rtl=%llu > combined=%llu, stack/rtl=%.2f (>=2.5)",
                  (unsigned long long)rows[0].dispatched, (unsigned long long)rows[1].dispatched,
                  (unsigned long long)rows[2].dispatched, c_ratio);
    report(2, ok2, buf);
}

// ---- 3: combining golden shape ----

void criterion_golden() {
    bool ok = true;
    std::string got;
    for (bool specialize : {false, true}) {
        CompileOutput out =
            load_program(bench_path("empty_loop.dl"), opts(true, specialize, false));
        Op want = specialize ? Op::ibtltinc : Op::btltinc;
        int fused = 0;
        bool self_loop = false;
        for (const BcUnit& u : out.program.units) {
            for (size_t i = 0; i < u.rtl.size(); i++) {
                if (is_fused_branch(u.rtl[i].op) && (op_info(u.rtl[i].op).fields & kFImmInt) != 0) {
                    fused++;
                    self_loop = u.rtl[i].op == want && u.rtl[i].pc == int32_t(i);
                }
            }
        }
        ok = ok && fused == 1 && self_loop;
        got += (specialize ? " +specialize:" : " combine:") + std::to_string(fused) +
               (self_loop ? " self-loop" : " NOT-self-loop");
    }
    report(3, ok, "empty-loop body is exactly one self-targeting btltinc/ibtltinc --" + got);
}

// ---- 4: semantics preservation across flags and engines ----

void criterion_semantics() {
    int configs_checked = 0;
    std::string first_mismatch;
    for (const CorpusEntry& e : corpus()) {
        Outcome base = run_file(e.file, e.argv, opts(false, false, false));
        for (int mask = 0; mask < 8; mask++) {
            Outcome o = run_file(e.file, e.argv, opts(mask & 1, mask & 2, mask & 4));
            configs_checked++;
            if (o.out != base.out || o.exit_code != base.exit_code) {
                if (first_mismatch.empty())
                    first_mismatch = std::string(e.file) + " flags=" + std::to_string(mask);
            }
        }
        Outcome stack = run_file(e.file, e.argv, opts(false, false, false, VmKind::Stack));
        configs_checked++;
        if (stack.out != base.out || stack.exit_code != base.exit_code) {
            if (first_mismatch.empty()) first_mismatch = std::string(e.file) + " stack-vm";
        }
    }
    std::snprintf(buf, sizeof buf,
                  "output identical across %zu programs x (8 flag subsets + stack vm) = %d runs%s%s",
                  corpus().size(), configs_checked, first_mismatch.empty() ? "" : "; first diff: ",
                  first_mismatch.c_str());
    report(4, first_mismatch.empty(), buf);
}

// ---- 5: inference soundness and full specialization of the hot loop ----

void criterion_inference() {
    size_t violations = 0, observed = 0;
    for (const CorpusEntry& e : corpus()) {
        CompileOutput c = load_program(bench_path(e.file), opts(true, true, true));
        Outcome o = run(c.program, e.argv, true, false, true);
        for (size_t u = 0; u < c.program.units.size(); u++) {
            const BcUnit& unit = c.program.units[u];
            InferResult inf = infer_types(unit, Cfg::build(unit));
            const auto& rec = o.report.types.input_tags[u];
            for (size_t i = 0; i < rec.size(); i++) {
                for (size_t k = 0; k < rec[i].size(); k++) {
                    if (!rec[i][k]) continue;
                    observed++;
                    if (rec[i][k] & ~inf.inputs[i][k]) violations++;
                }
            }
        }
    }

    CompileOutput loop = load_program(bench_path("loop.dl"), opts(true, true, true));
    Outcome o = run(loop.program, {"5"});
    uint64_t generic = o.report.counters.generic_arith();
    uint64_t specialized = o.report.counters.specialized_arith();

    bool ok = violations == 0 && observed > 0 && generic == 0 && specialized > 0;
    std::snprintf(buf, sizeof buf,
                  "recorded tags subset of inferred: %zu/%zu operands clean; loop.dl generic "
                  "arith executed=%llu (==0), specialized=%llu (>0)",
                  observed - violations, observed, (unsigned long long)generic,
                  (unsigned long long)specialized);
    report(5, ok, buf);
}

// ---- 6: pure-call memoization ----

void criterion_memo() {
    auto t0 = std::chrono::steady_clock::now();
    CompileOutput c = load_program(bench_path("fib.dl"), opts(true, true, true));
    int fib_id = -1;
    for (const BcUnit& u : c.program.units)
        if (u.name == "fib") fib_id = u.func_id;

    auto tm0 = std::chrono::steady_clock::now();
    Outcome memo = run(c.program, {"30"}, true);
    double t_memo = std::chrono::duration<double>(std::chrono::steady_clock::now() - tm0).count();
    auto tp0 = std::chrono::steady_clock::now();
    Outcome plain = run(c.program, {"30"}, false);
    double t_plain = std::chrono::duration<double>(std::chrono::steady_clock::now() - tp0).count();
    double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    uint64_t entries = fib_id >= 0 ? memo.report.memo[fib_id].entries : ~0ull;
    uint64_t plain_calls = fib_id >= 0 ? plain.report.profile.calls[fib_id] : 0;
    double speedup = t_memo > 0 ? t_plain / t_memo : 0;

    bool ok = memo.out == "832040\n" && plain.out == "832040\n" && entries <= 31 &&
              plain_calls > 1000000 && speedup >= 10.0 && total < 10.0;
    std::snprintf(buf, sizeof buf,
                  "fib(30): memo entries=%llu (<=31), plain calls=%llu (>1e6), speedup=%.0fx "
                  "(>=10), total=%.2fs (<10)",
                  (unsigned long long)entries, (unsigned long long)plain_calls, speedup, total);
    report(6, ok, buf);
}

// ---- 7: associative table against a model ----

// Mirrors the table's key equivalence: an integral float is the same key as
// the equal int, everything else separates by tag.
std::string model_key(const Value& v) {
    if (v.tag() == Tag::Float) {
        double f = v.as_float();
        if (f >= -9223372036854775808.0 && f < 9223372036854775808.0 &&
            double(int64_t(f)) == f)
            return "int|" + std::to_string(int64_t(f));
    }
    return std::string(tag_name(v.tag())) + "|" + render_value(v);
}

void criterion_table() {
    std::mt19937_64 rng(0x5eed);
    std::vector<Value> keys;
    for (int i = 0; i < 400; i++) {
        switch (rng() % 3) {
        case 0: keys.push_back(Value::make_int(int64_t(rng() % 3000))); break;
        case 1: keys.push_back(Value::make_str("k" + std::to_string(rng() % 1500))); break;
        default: keys.push_back(Value::make_float(double(rng() % 700) * 0.5)); break;
        }
    }

    AssocTable t;
    std::map<std::string, int64_t> model;
    size_t mismatches = 0;
    bool load_ok = true;
    for (int op = 0; op < 100000; op++) {
        const Value& key = keys[rng() % keys.size()];
        std::string mk = model_key(key);
        switch (rng() % 3) {
        case 0: {
            int64_t v = int64_t(rng());
            t.put(key, Value::make_int(v));
            model[mk] = v;
            break;
        }
        case 1: {
            const Value* hit = t.get(key);
            auto mit = model.find(mk);
            bool same = mit == model.end() ? hit == nullptr
                                           : hit != nullptr && hit->as_int() == mit->second;
            if (!same) mismatches++;
            break;
        }
        default:
            if (t.del(key) != (model.erase(mk) > 0)) mismatches++;
            break;
        }
        if (t.size() != model.size()) mismatches++;
        if (double(t.size() + t.tombstones()) > AssocTable::kMaxLoad * double(t.capacity()))
            load_ok = false;
    }

    // probe full cycle at capacity 16, mirroring the find() step derivation
    bool cycle_ok = true;
    for (int trial = 0; trial < 256; trial++) {
        uint64_t h = rng();
        size_t step = (size_t(fmix64(h ^ 0x9e3779b97f4a7c15ULL)) & 15) | 1;
        std::set<size_t> seen;
        size_t idx = size_t(h) & 15;
        for (int i = 0; i < 16; i++) {
            seen.insert(idx);
            idx = (idx + step) & 15;
        }
        cycle_ok = cycle_ok && seen.size() == 16;
    }

    bool ok = mismatches == 0 && load_ok && cycle_ok;
    std::snprintf(buf, sizeof buf,
                  "table vs model: 100000 ops, %zu mismatches (==0); load<=0.70 %s; capacity-16 "
                  "probe cycle %s",
                  mismatches, load_ok ? "held" : "VIOLATED", cycle_ok ? "covers all slots" : "BROKEN");
    report(7, ok, buf);
}

// ---- 8: bytecode text round trip ----

void criterion_roundtrip() {
    std::string bad;
    for (const CorpusEntry& e : corpus()) {
        CompileOutput c = load_program(bench_path(e.file), opts(true, true, true));
        std::string d1 = dump_text(c.program);
        Program back = parse_text(d1, e.file);
        if (dump_text(back) != d1) {
            bad = std::string(e.file) + " dump not a fixed point";
            break;
        }
        Outcome src_run = run(c.program, e.argv);
        Outcome dump_run = run(back, e.argv);
        if (src_run.out != dump_run.out || src_run.exit_code != dump_run.exit_code) {
            bad = std::string(e.file) + " dump run differs";
            break;
        }
    }
    std::snprintf(buf, sizeof buf, "dump/parse/dump byte-identical and dump runs match on %zu programs%s%s",
                  corpus().size(), bad.empty() ? "" : ": ", bad.c_str());
    report(8, bad.empty(), buf);
}

// ---- 9: sieve oracle ----

void criterion_sieve() {
    Outcome rtl = run_file("sieve.dl", {}, opts(true, true, true));
    Outcome stack = run_file("sieve.dl", {}, opts(false, false, false, VmKind::Stack));
    bool ok = rtl.out == "1899\n" && stack.out == "1899\n" && rtl.exit_code == 0;
    std::snprintf(buf, sizeof buf, "sieve.dl prints %s (want 1899) on both engines",
                  rtl.out.substr(0, rtl.out.find('\n')).c_str());
    report(9, ok, buf);
}

// ---- 10: profiler format ----

void criterion_profiler() {
    CompileOutput c = load_program(bench_path("loop.dl"), opts(true, true, true));
    Outcome o = run(c.program, {"5"}, true, true);
    std::string text = format_profile(c.program, o.report.profile);

    const std::string header = "** Calls *** Time **** Name\n";
    bool header_ok = text.rfind(header, 0) == 0;

    size_t last_nl = text.find_last_of('\n', text.size() - 2);
    std::string last_line = text.substr(last_nl + 1);
    bool footer_ok = last_line.find("All Program") != std::string::npos;

    double self_sum = 0;
    for (double s : o.report.profile.self_seconds) self_sum += s;
    bool time_ok = self_sum <= o.report.profile.total_seconds * 1.05 + 1e-9;

    bool ok = header_ok && footer_ok && time_ok;
    std::snprintf(buf, sizeof buf,
                  "profiler: header %s, All Program last %s, self-sum=%.3fs vs total=%.3fs (+5%%)",
                  header_ok ? "exact" : "WRONG", footer_ok ? "yes" : "no", self_sum,
                  o.report.profile.total_seconds);
    report(10, ok, buf);
}

} // namespace

int main() {
    criteria_ladder();
    criterion_golden();
    criterion_semantics();
    criterion_inference();
    criterion_memo();
    criterion_table();
    criterion_roundtrip();
    criterion_sieve();
    criterion_profiler();

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
