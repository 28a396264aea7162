"""Smoke checks for the _dinolite extension; run with the build dir on sys.path."""

import sys

import _dinolite as dl


def test_run_basic():
    r = dl.run('putln(2 + 3);')
    assert r["exit_code"] == 0, r
    assert r["stdout"] == "5\n"
    assert r["error"] == ""
    assert r["dispatched"] > 0


def test_argv_and_flags():
    src = "putln(argv[0]); putln(int(argv[1]) * 2);"
    r = dl.run(src, argv=["go", "21"])
    assert r["stdout"] == "go\n42\n"
    plain = dl.run(src, argv=["go", "21"], combine=False, specialize=False, inline_calls=False)
    assert plain["stdout"] == r["stdout"]
    assert plain["dispatched"] >= r["dispatched"]
    stack = dl.run(src, argv=["go", "21"], vm="stack")
    assert stack["stdout"] == r["stdout"]
    assert stack["dispatched"] > r["dispatched"]


def test_runtime_error_reported():
    r = dl.run("putln(1 / 0);")
    assert r["exit_code"] == 70
    assert "division by zero" in r["error"]


def test_compile_error_raises():
    try:
        dl.run("var = ;")
    except RuntimeError as e:
        assert "parse" in str(e)
    else:
        raise AssertionError("expected a compile error")


def test_dump_roundtrip():
    src = "var i; for (i = 0; i < 5; i++); putln(i);"
    text = dl.dump(src, combine=True, specialize=True)
    assert "ibtltinc" in text
    r = dl.run_dump(text)
    assert r["stdout"] == "5\n"
    plain = dl.dump(src)
    assert "btltinc" not in plain


def test_memo_counters():
    src = '!pure fun fib(n) { if (n < 2) return n; return fib(n - 1) + fib(n - 2); } putln(fib(25));'
    r = dl.run(src)
    assert r["stdout"] == "75025\n"
    assert 0 < r["memo_entries"] <= 26
    assert r["memo_hits"] > 0
    off = dl.run(src, memoize=False)
    assert off["stdout"] == "75025\n"
    assert off["memo_entries"] == 0


def test_bench_tsv():
    rows = dl.bench("var i; for (i = 0; i < 2000; i++); putln(i);", repeat=1).splitlines()
    assert rows[0] == "config\tmin-seconds\tdispatches\tdispatches-per-second"
    assert len(rows) == 6
    assert rows[1].startswith("stack\t")
    assert rows[5].startswith("rtl+all+memoize\t")


def main():
    failures = 0
    for name, fn in sorted(globals().items()):
        if not name.startswith("test_"):
            continue
        try:
            fn()
            print(f"ok   {name}")
        except Exception as e:  # noqa: BLE001 - report and continue
            print(f"FAIL {name}: {e}")
            failures += 1
    return failures


if __name__ == "__main__":
    sys.exit(main())
