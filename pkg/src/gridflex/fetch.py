"""Raw yearly data files, from the bundled benchmark or an HTTP mirror.

Everything downstream is strictly file based; this module only procures the
three raw files per year (generation by type, spot prices, emission
factors). The default source is the deterministic bundled generator, which
needs no network at all. Alternatively a base URL can point at any mirror
serving the same layout, in which case this acts as a thin download client:
no retries, no authentication, no parsing.
"""

from __future__ import annotations

import hashlib
import json
import shutil
import urllib.request
from pathlib import Path
from typing import Iterable, Mapping

from . import benchmark

#: File kind -> name pattern, identical for both sources.
RAW_FILES: Mapping[str, str] = {
    "generation": "generation_{year}.csv",
    "prices": "prices_{year}.csv",
    "factors": "factors_{year}.csv",
}


def fetch_year(
    year: int,
    out_dir: str | Path,
    base_url: str | None = None,
    timeout_s: float = 60.0,
) -> dict[str, Path]:
    """Write one year's raw files and return their paths keyed by kind.

    Without ``base_url`` the bundled generator produces the files. With it,
    ``{base_url}/{filename}`` is downloaded for each kind; downloads go to a
    ``.part`` file first so an aborted transfer never leaves a plausible
    looking raw file behind.
    """
    if base_url is None:
        return benchmark.generate_year(year, out_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}
    for kind, pattern in RAW_FILES.items():
        name = pattern.format(year=year)
        url = f"{base_url.rstrip('/')}/{name}"
        dest = out / name
        part = dest.with_suffix(dest.suffix + ".part")
        with urllib.request.urlopen(url, timeout=timeout_s) as resp:
            with open(part, "wb") as fh:
                shutil.copyfileobj(resp, fh)
        part.replace(dest)
        paths[kind] = dest
    return paths


def fetch_dataset(
    years: Iterable[int],
    out_dir: str | Path,
    base_url: str | None = None,
) -> Path:
    """Fetch several years and record their checksums in ``manifest.json``."""
    years = list(years)
    if base_url is None:
        return benchmark.generate_dataset(out_dir, years)
    out = Path(out_dir)
    manifest: dict[str, dict] = {"years": {}}
    for year in years:
        paths = fetch_year(year, out, base_url)
        manifest["years"][str(year)] = {
            kind: {
                "file": p.name,
                "sha256": hashlib.sha256(p.read_bytes()).hexdigest(),
            }
            for kind, p in paths.items()
        }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n",
                             encoding="utf-8")
    return manifest_path
