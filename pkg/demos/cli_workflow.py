"""Drive the command line interface end to end from Python.

Saves a system to the JSON interchange format, runs classify and
factor-kl on it through the CLI entry point, and reads the emitted
reports back.  Everything lands in a temporary directory.
"""

import json
import tempfile
from pathlib import Path

from pontsys import blaschke_potapov_factor, cascade, invert_system, save_system
from pontsys.cli import main as cli_main


def run(out, *argv):
    print(f"$ pontsys {' '.join(argv)}")
    code = cli_main(["--out", str(out), *argv])
    print(f"  -> exit {code}")
    return code


def main():
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        system = cascade(
            invert_system(blaschke_potapov_factor(0.5, 1.0, [1.0], 1)),
            blaschke_potapov_factor(0.3, 1.0, [1.0], 1))
        path = tmp / "mixed.json"
        save_system(system, path, name="mixed demo system")

        run(tmp, "classify", str(path))
        report = json.loads((tmp / "classify.report.json").read_text())
        print("  verdicts:", report["verdicts"])

        run(tmp, "factor-kl", str(path), "--mode", "right")
        report = json.loads((tmp / "factor-kl.report.json").read_text())
        print("  kappa:", report["verdicts"]["kappa"],
              " residual:", report["residuals"]["cascade_reconstruction"])
        print("  factor files:",
              sorted(p.name for p in tmp.glob("factor_*.json")))


if __name__ == "__main__":
    main()
