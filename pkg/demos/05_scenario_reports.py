"""
Scenario files and reports
==========================

The same comparison can be driven from a JSON scenario.  The command line
equivalent is

    radreact run --config demos/configs/gaussian_bump.json --out reports
"""

import sys
import tempfile
from pathlib import Path

from radreact import emit_report, load_config, run_scenario

here = Path(__file__).resolve().parent
name = sys.argv[1] if len(sys.argv) > 1 else "smooth_step"
scenario = load_config(here / "configs" / f"{name}.json")
report = run_scenario(scenario)

for check, entry in sorted(report.checks.items()):
    print(f"{'ok ' if entry['passed'] else 'BAD'} {check}")

out = Path(tempfile.mkdtemp())
for path in emit_report(report, out):
    print("wrote", path)
