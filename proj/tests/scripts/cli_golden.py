#!/usr/bin/env python3
"""CLI checks: JSON schemas, golden reports and exit codes.

usage: cli_golden.py CPSOS_BINARY REPO_ROOT [--update]
"""
import json
import math
import re
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

NUMBER = re.compile(r"-?(?:inf|nan|\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)")
IGNORED_KEYS = {"seconds"}
COMMANDS = [("solve", "solve-report"), ("analyze", "analyze-report"), ("compare", "compare-report")]

failures = []


def fail(msg):
    failures.append(msg)
    print("FAIL", msg)


def close(a, b):
    if a == b:
        return True
    try:
        x, y = float(a), float(b)
    except ValueError:
        return False
    if math.isnan(x) or math.isnan(y) or math.isinf(x) or math.isinf(y):
        return False
    return abs(x - y) <= 1e-6 + 1e-4 * max(abs(x), abs(y))


def same_text(a, b):
    # Numbers embedded in messages get the numeric tolerance.
    if NUMBER.sub("#", a) != NUMBER.sub("#", b):
        return False
    return all(close(x, y) for x, y in zip(NUMBER.findall(a), NUMBER.findall(b)))


def diff(a, b, path=""):
    if isinstance(a, dict) and isinstance(b, dict):
        if a.keys() != b.keys():
            return f"{path}: keys {sorted(a.keys() ^ b.keys())} differ"
        for k in a:
            if k in IGNORED_KEYS:
                continue
            d = diff(a[k], b[k], f"{path}.{k}")
            if d:
                return d
        return None
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return f"{path}: length {len(a)} vs {len(b)}"
        for i, (x, y) in enumerate(zip(a, b)):
            d = diff(x, y, f"{path}[{i}]")
            if d:
                return d
        return None
    if isinstance(a, str) and isinstance(b, str):
        return None if same_text(a, b) else f"{path}: {a!r} vs {b!r}"
    return None if a == b else f"{path}: {a!r} vs {b!r}"


def run(binary, *args):
    return subprocess.run([binary, *args], capture_output=True, text=True, timeout=300)


def main():
    binary, root = sys.argv[1], Path(sys.argv[2])
    update = "--update" in sys.argv[3:]
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text())
               for p in (root / "docs" / "schemas").glob("*.schema.json")}
    golden = root / "tests" / "golden"
    corpus = sorted((root / "corpus").glob("*.json"))

    for path in corpus:
        kind = "certificate" if path.name.endswith(".cert.json") else "problem"
        try:
            jsonschema.validate(json.loads(path.read_text()), schemas[kind])
        except jsonschema.ValidationError as e:
            fail(f"{path.name}: {kind} schema: {e.message}")

    for path in corpus:
        if path.name.endswith(".cert.json"):
            continue
        for cmd, schema in COMMANDS:
            r = run(binary, cmd, str(path), "--json", "-")
            tag = f"{cmd} {path.name}"
            if r.returncode != 0:
                fail(f"{tag}: exit {r.returncode}: {r.stderr.strip()}")
                continue
            report = json.loads(r.stdout)
            try:
                jsonschema.validate(report, schemas[schema])
            except jsonschema.ValidationError as e:
                fail(f"{tag}: schema: {e.message}")
            ref = golden / f"{path.stem}.{cmd}.json"
            if update:
                ref.write_text(json.dumps(report, indent=2) + "\n")
            elif not ref.exists():
                fail(f"{tag}: no golden file {ref.name}")
            else:
                d = diff(json.loads(ref.read_text()), report)
                if d:
                    fail(f"{tag}: differs from golden at {d}")

    # Exit codes.
    interval, cert = root / "corpus" / "interval.json", root / "corpus" / "interval.cert.json"
    r = run(binary, "verify", str(interval), str(cert))
    if r.returncode != 0 or "VERIFIED, residual 0 (exact)" not in r.stdout:
        fail(f"verify interval hand certificate: exit {r.returncode}, output {r.stdout!r}")
    r = run(binary, "verify", str(interval), str(cert), "--json", "-")
    try:
        jsonschema.validate(json.loads(r.stdout), schemas["verify-report"])
    except (ValueError, jsonschema.ValidationError) as e:
        fail(f"verify report schema: {e}")

    with tempfile.TemporaryDirectory() as tmp:
        tampered = json.loads(cert.read_text())
        tampered["blocks"][0]["gram"]["data"][0] = "0.51"
        bad_cert = Path(tmp) / "tampered.cert.json"
        bad_cert.write_text(json.dumps(tampered))
        r = run(binary, "verify", str(interval), str(bad_cert))
        if r.returncode != 1 or "FAILED" not in r.stdout:
            fail(f"tampered certificate: exit {r.returncode}, output {r.stdout!r}")

        malformed = Path(tmp) / "malformed.json"
        malformed.write_text('{"n": 1, "objective": ')
        for cmd in ("solve", "analyze", "compare"):
            r = run(binary, cmd, str(malformed))
            if r.returncode != 2:
                fail(f"{cmd} on malformed JSON: exit {r.returncode}, expected 2")

    r = run(binary, "solve", str(interval), "--mode", "bogus")
    if r.returncode != 2:
        fail(f"unknown mode: exit {r.returncode}, expected 2")
    r = run(binary, "--backend", "nope", "solve", str(interval))
    if r.returncode != 2:
        fail(f"unknown backend: exit {r.returncode}, expected 2")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
