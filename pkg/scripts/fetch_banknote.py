#!/usr/bin/env python3
"""Fetch the UCI banknote authentication dataset into data/banknote.csv.

The file is downloaded from the UCI repository (or ingested from a local
copy with --from), structurally validated, and stored together with its
SHA-256 digest in data/banknote.sha256.  The digest is recorded on first
use, from the bytes actually received -- there is no hard-coded expected
hash.  On any later run the digest of the new download must match the
recorded one, so a silently changed upstream file is caught.

Usage:
    python3 scripts/fetch_banknote.py            # download from UCI
    python3 scripts/fetch_banknote.py --from F   # ingest a local copy
"""

import argparse
import hashlib
import sys
import urllib.request
from pathlib import Path

URL = ("https://archive.ics.uci.edu/ml/machine-learning-databases/"
       "00267/data_banknote_authentication.txt")
DATA_DIR = Path(__file__).resolve().parents[1] / "data"
CSV_PATH = DATA_DIR / "banknote.csv"
SHA_PATH = DATA_DIR / "banknote.sha256"
EXPECTED_ROWS = 1372
EXPECTED_BY_CLASS = {0: 762, 1: 610}


def validate(text: str) -> None:
    rows = [line for line in text.splitlines() if line.strip()]
    if len(rows) != EXPECTED_ROWS:
        raise SystemExit(
            f"error: expected {EXPECTED_ROWS} data rows, got {len(rows)}")
    counts = {0: 0, 1: 0}
    for k, line in enumerate(rows, start=1):
        fields = line.split(",")
        if len(fields) != 5:
            raise SystemExit(f"error: row {k} has {len(fields)} fields, "
                             f"expected 5: {line!r}")
        try:
            [float(f) for f in fields[:4]]
            label = int(fields[4])
        except ValueError:
            raise SystemExit(f"error: row {k} is not numeric: {line!r}")
        if label not in counts:
            raise SystemExit(f"error: row {k} has class label {label}, "
                             f"expected 0 or 1")
        counts[label] += 1
    if counts != EXPECTED_BY_CLASS:
        print(f"warning: class counts {counts} differ from the documented "
              f"{EXPECTED_BY_CLASS}", file=sys.stderr)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--from", dest="source", metavar="FILE",
                        help="ingest a local copy instead of downloading")
    args = parser.parse_args()

    if args.source:
        raw = Path(args.source).read_bytes()
        origin = args.source
    else:
        print(f"downloading {URL} ...")
        with urllib.request.urlopen(URL, timeout=60) as response:
            raw = response.read()
        origin = URL

    digest = hashlib.sha256(raw).hexdigest()
    validate(raw.decode("utf-8"))

    if SHA_PATH.exists():
        recorded = SHA_PATH.read_text().split()[0]
        if digest != recorded:
            raise SystemExit(
                f"error: digest mismatch\n  recorded  {recorded}\n"
                f"  received  {digest}\nThe file from {origin} differs from "
                f"the one first fetched; not overwriting. Delete "
                f"{SHA_PATH} to trust the new copy.")
        print("digest matches the recorded value")
    else:
        DATA_DIR.mkdir(exist_ok=True)
        SHA_PATH.write_text(f"{digest}  {CSV_PATH.name}\n")
        print(f"recorded sha256 {digest} (first fetch)")

    CSV_PATH.write_bytes(raw)
    print(f"wrote {CSV_PATH} ({len(raw)} bytes, {EXPECTED_ROWS} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
