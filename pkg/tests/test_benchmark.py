import subprocess
import sys
from pathlib import Path

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"


def test_benchmark_runs_and_reports_both_backends():
    proc = subprocess.run(
        [sys.executable, str(BENCH), "--pairs", "500"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    for op in ("pinc_counts", "lcs_length", "window_repeat", "clipped_counts"):
        assert op in proc.stdout
    assert "python" in proc.stdout
