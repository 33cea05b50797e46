"""Catalog audit: shipped data, then a copy with one realized k=4 entry removed."""

import argparse

from ovalis import catalog as C


def show(title, lines):
    print(title)
    for line in lines:
        print(f"  ({line.check}) {'PASS' if line.passed else 'FAIL'}  {line.detail}")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--drop", default="2:2:2:2", help="scheme removed in the mutated copy")
    a = ap.parse_args()
    cat = C.default_catalog()
    show("shipped catalog", C.validate(cat))
    show(f"without {a.drop}", C.validate(cat.without(a.drop)))


if __name__ == "__main__":
    main()
