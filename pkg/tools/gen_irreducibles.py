"""Regenerate src/bsfe/_irreducibles.py (lowest-weight irreducibles, degrees 17..MAX)."""

import sys
from pathlib import Path

from bsfe.gf2poly import exponents, lowest_weight_irreducible

MAX_DEGREE = 512


def main():
    lines = [
        '"""Generated by tools/gen_irreducibles.py. Do not edit."""',
        "",
        "# degree -> middle exponents of x^d + ... + 1",
        "MIDDLE_EXPONENTS = {",
    ]
    for d in range(17, MAX_DEGREE + 1):
        f = lowest_weight_irreducible(d)
        mids = exponents(f)[1:-1]
        lines.append(f"    {d}: {mids!r},")
        if d % 64 == 0:
            print(d, file=sys.stderr)
    lines.append("}")
    out = Path(__file__).resolve().parents[1] / "src" / "bsfe" / "_irreducibles.py"
    out.write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
