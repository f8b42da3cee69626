"""Freeze the brute-force orbit oracle's class lists for small heights.

The oracle partitions every form with coefficients in [-B, B] into
GL2(Z)-orbits by closure under generators (no reduction theory involved);
each orbit is then labelled with its canonical representative.

    python3 scripts/freeze_oracle.py --box 3 --height 30 > tests/data/oracle_classes.json
"""
import argparse
import json
from fractions import Fraction

from binquartic.forms import below_height, quartic_invariants
from binquartic.reduction import brute_force_orbits, canonical


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--box", type=int, default=3)
    ap.add_argument("--height", type=Fraction, default=Fraction(30))
    args = ap.parse_args()
    orbits = brute_force_orbits(args.box, irreducible_only=False)
    fibers = {}
    for label in orbits:
        I, J = quartic_invariants(label)
        if below_height(I, J, args.height):
            fibers.setdefault(f"{I} {J}", []).append(list(canonical(label)))
    out = {"box": args.box, "height": str(args.height),
           "fibers": {k: sorted(v) for k, v in sorted(fibers.items())}}
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
