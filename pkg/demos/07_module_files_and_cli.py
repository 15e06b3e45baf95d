"""The text format and the command-line surface.

Module files are hand-auditable: algebra, window, labeled components,
and the differential and action values as rational combinations.  Every
CLI command emits a reproducible run report with content-hashed inputs.
"""
import subprocess
import sys
import tempfile
from pathlib import Path

from koszuldg import parse_module, print_module

SAMPLE = """\
module torsion-sample
algebra poly 2
window -4 0
complete both
component 0 u
component -1 w
component -2 v
d w = v
x1 u = v
"""

M = parse_module(SAMPLE)
print("parsed module dims:", {n: M.dim(n) for n in M.degrees()})
print("\ncanonical form:")
print(print_module(M))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "sample.kdg"
    path.write_text(SAMPLE)
    for cmd in (
        ["homology", "--module", str(path)],
        ["koszul-t", "--module", str(path), "--group", "2"],
        ["ext", "--group", "2", "--M", "k", "--N", "k"],
        ["groups", "shift-check", "--pair", "T<SU(2)", "--module", "k"],
    ):
        print("$ koszuldg", " ".join(cmd))
        out = subprocess.run([sys.executable, "-m", "koszuldg.cli"] + cmd,
                             capture_output=True, text=True)
        print(out.stdout)
