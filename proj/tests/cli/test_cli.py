"""End-to-end checks of the dinolite executable: exit codes, flags, file io.

Usage: test_cli.py <dinolite-binary> <benchmarks-dir>
"""

import os
import subprocess
import sys
import tempfile
from pathlib import Path

BIN = Path(sys.argv[1])
BENCH = Path(sys.argv[2])


def dino(*args, **kw):
    return subprocess.run([str(BIN), *args], capture_output=True, text=True, timeout=120, **kw)


def test_run_sieve():
    r = dino("run", str(BENCH / "sieve.dl"))
    assert r.returncode == 0, r.stderr
    assert r.stdout == "1899\n"


def test_run_passes_argv():
    r = dino("run", str(BENCH / "fib.dl"), "10")
    assert r.stdout == "55\n"


def test_usage_error_is_64():
    r = dino("run", "--vm=stack", "--specialize", str(BENCH / "sieve.dl"))
    assert r.returncode == 64
    assert "usage error" in r.stderr
    r = dino("run", "--vm=stack", "--dump-bc", "/tmp/x.dlb", str(BENCH / "sieve.dl"))
    assert r.returncode == 64
    r = dino("frobnicate")
    assert r.returncode == 64


def test_compile_error_is_65():
    with tempfile.TemporaryDirectory() as d:
        bad = Path(d) / "bad.dl"
        bad.write_text("var = 1;\n")
        r = dino("run", str(bad))
        assert r.returncode == 65
        assert "error" in r.stderr and "line" in r.stderr


def test_runtime_error_is_70():
    with tempfile.TemporaryDirectory() as d:
        boom = Path(d) / "boom.dl"
        boom.write_text("putln(1 / 0);\n")
        r = dino("run", str(boom))
        assert r.returncode == 70
        assert "division by zero" in r.stderr


def test_count_tsv_on_stderr():
    r = dino("run", "--count", str(BENCH / "fact.dl"))
    assert r.returncode == 0
    assert r.stdout == "3628800\n"
    lines = r.stderr.splitlines()
    assert any(line.startswith("dispatched\t") for line in lines)
    assert any(line.startswith("op\t") for line in lines)


def test_profile_on_stderr():
    r = dino("run", "-p", str(BENCH / "fact.dl"))
    assert r.returncode == 0
    assert r.stderr.startswith("** Calls *** Time **** Name")
    assert "All Program" in r.stderr.splitlines()[-1]


def test_opt_report():
    r = dino("run", "--opt-report", str(BENCH / "method.dl"), "10")
    assert r.returncode == 0
    head = r.stderr.splitlines()[0]
    assert head == "function\tinstrs-before\tinstrs-after\tspecialized\tcombined\tinlined"


def test_dump_defaults_off_and_flags_enable():
    r = dino("dump", str(BENCH / "empty_loop.dl"))
    assert r.returncode == 0
    assert "btltinc" not in r.stdout
    assert ".func" in r.stdout
    r = dino("dump", "--combine", str(BENCH / "empty_loop.dl"))
    assert "btltinc" in r.stdout
    r = dino("dump", "--combine", "--specialize", str(BENCH / "empty_loop.dl"))
    assert "ibtltinc" in r.stdout


def test_dump_bc_roundtrip():
    with tempfile.TemporaryDirectory() as d:
        dlb = Path(d) / "sieve.dlb"
        direct = dino("run", "--dump-bc", str(dlb), str(BENCH / "sieve.dl"))
        assert direct.returncode == 0
        assert dlb.exists()
        from_dump = dino("run", str(dlb))
        assert from_dump.returncode == 0
        assert from_dump.stdout == direct.stdout
        # dumps are final: optimizer flags on .dlb input are a usage error
        r = dino("run", "--combine", str(dlb))
        assert r.returncode == 64
        r = dino("run", "--vm=stack", str(dlb))
        assert r.returncode == 64
        # and dump output re-dumps to the same bytes
        second = dino("dump", str(dlb))
        assert second.stdout == dlb.read_text()


def test_inline_limit_flag_and_env():
    r = dino("dump", "--inline", "--inline-limit", "0", str(BENCH / "method.dl"))
    assert r.stdout.count(" call ") == 2  # step() and main() both still called
    r = dino("dump", "--inline", str(BENCH / "method.dl"))
    assert r.stdout.count(" call ") == 1  # only the unhinted main() call survives
    env = dict(os.environ, DINOLITE_INLINE_LIMIT="0")
    r = dino("dump", "--inline", str(BENCH / "method.dl"), env=env)
    assert r.stdout.count(" call ") == 2


def test_bench_tsv():
    with tempfile.TemporaryDirectory() as d:
        tiny = Path(d) / "tiny.dl"
        tiny.write_text("var i; for (i = 0; i < 5000; i++); putln(i);\n")
        r = dino("bench", "--repeat", "1", str(tiny))
        assert r.returncode == 0, r.stderr
        lines = r.stdout.splitlines()
        assert lines[0] == "config\tmin-seconds\tdispatches\tdispatches-per-second"
        assert len(lines) == 6
        configs = [line.split("\t")[0] for line in lines[1:]]
        assert configs == ["stack", "rtl", "rtl+combine", "rtl+combine+specialize+inline",
                           "rtl+all+memoize"]
        counts = [int(line.split("\t")[2]) for line in lines[1:]]
        assert counts[0] > counts[1] > counts[2]
        assert counts[2] >= counts[3] >= counts[4]


def test_bench_failing_program_is_70():
    with tempfile.TemporaryDirectory() as d:
        boom = Path(d) / "boom.dl"
        boom.write_text("putln(1 / 0);\n")
        r = dino("bench", "--repeat", "1", str(boom))
        assert r.returncode == 70
        assert "FAILED" in r.stdout


def main():
    failures = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_"):
            continue
        try:
            fn()
            print(f"ok   {name}")
        except Exception as e:  # noqa: BLE001
            print(f"FAIL {name}: {e}")
            failures += 1
    return failures


if __name__ == "__main__":
    sys.exit(main())
