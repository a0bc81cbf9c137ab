"""CSV output with an echoed config header and a checksum of the parsed values.

Floats are written with ``repr`` (shortest round-trip form), so re-reading a
file reproduces every value exactly and the checksum can be recomputed.
"""

import csv
import hashlib
import io
import json

CHECKSUM_PREFIX = "# checksum: sha256="


def _fmt(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse(field):
    try:
        return int(field)
    except ValueError:
        pass
    try:
        return float(field)
    except ValueError:
        return field


def checksum(columns, rows):
    """sha256 over the canonical text of column names and parsed row values."""
    h = hashlib.sha256()
    h.update(",".join(columns).encode())
    for row in rows:
        h.update(b"\n")
        h.update(",".join(_fmt(_parse(_fmt(v))) for v in row).encode())
    return h.hexdigest()


def render_csv(columns, rows, config=None, title=None):
    buf = io.StringIO()
    if title:
        buf.write(f"# {title}\n")
    if config is not None:
        buf.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    buf.write(CHECKSUM_PREFIX + checksum(columns, rows) + "\n")
    return buf.getvalue()


def write_csv(path, columns, rows, config=None, title=None):
    rows = [list(r) for r in rows]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(columns, rows, config, title))
    return path


def read_csv(path):
    """Return (columns, rows, stored checksum, comment lines)."""
    comments, body, stored = [], [], None
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith(CHECKSUM_PREFIX):
                stored = line[len(CHECKSUM_PREFIX) :]
            elif line.startswith("#"):
                comments.append(line)
            elif line:
                body.append(line)
    parsed = list(csv.reader(body))
    if not parsed:
        return [], [], stored, comments
    columns = parsed[0]
    rows = [[_parse(f) for f in r] for r in parsed[1:]]
    return columns, rows, stored, comments


def verify_csv(path):
    """True when the stored checksum matches the re-parsed values."""
    columns, rows, stored, _ = read_csv(path)
    return stored is not None and stored == checksum(columns, rows)
