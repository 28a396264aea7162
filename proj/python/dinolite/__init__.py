"""Python face of the dinolite interpreter.

Everything heavy lives in the compiled extension; this package just
re-exports it.
"""

from ._dinolite import bench, dump, run, run_dump

__all__ = ["run", "dump", "run_dump", "bench"]
