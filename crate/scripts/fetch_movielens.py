#!/usr/bin/env python3
"""Materialize MovieLens-100K as a `UserID::MovieID::Rating::Timestamp` file.

GroupLens is the canonical source. When it is unreachable, the copy bundled in
the RecBole wheel on PyPI is used instead (same 100,000 ratings, tab separated).

Usage: scripts/fetch_movielens.py [OUT]   (default: data/ml-100k.dat)
"""
import io
import pathlib
import subprocess
import sys
import tempfile
import urllib.request
import zipfile

GROUPLENS = "https://files.grouplens.org/datasets/movielens/ml-100k.zip"


def from_grouplens():
    with urllib.request.urlopen(GROUPLENS, timeout=20) as resp:
        z = zipfile.ZipFile(io.BytesIO(resp.read()))
    rows = []
    for line in z.read("ml-100k/u.data").decode().splitlines():
        if line.strip():
            rows.append(line.split("\t"))
    return rows


def from_recbole():
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run(
            [sys.executable, "-m", "pip", "download", "--no-deps", "recbole==1.2.1", "-d", tmp],
            check=True,
            stdout=subprocess.DEVNULL,
        )
        wheel = next(pathlib.Path(tmp).glob("recbole-*.whl"))
        z = zipfile.ZipFile(wheel)
        text = z.read("recbole/dataset_example/ml-100k/ml-100k.inter").decode()
    rows = []
    for line in text.splitlines()[1:]:
        if line.strip():
            u, i, r, t = line.split("\t")
            rows.append([u, i, str(int(float(r))), str(int(float(t)))])
    return rows


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/ml-100k.dat")
    try:
        rows = from_grouplens()
    except Exception as err:  # noqa: BLE001
        print(f"grouplens unavailable ({err}); using the RecBole wheel", file=sys.stderr)
        rows = from_recbole()
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("".join("::".join(r) + "\n" for r in rows))
    print(f"wrote {len(rows)} ratings to {out}")


if __name__ == "__main__":
    main()
