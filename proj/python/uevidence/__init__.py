"""Python front end for the uevid checks; results are the CLI's machine documents."""

import json
import os
import tempfile

from ._uevidence import __version__, digest, random_flat_scenario
from ._uevidence import run as _run

__all__ = ["__version__", "run", "check", "build", "audit", "hierarchy", "validate", "digest", "random_flat_scenario"]


def _with_path(source, fn):
    if isinstance(source, (str, os.PathLike)):
        return fn(os.fspath(source))
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(source, fh)
        name = fh.name
    try:
        return fn(name)
    finally:
        os.unlink(name)


def run(command, source, which="", **kw):
    """Run a command on a file path or an in-memory document; returns (exit_code, report dict)."""
    code, text = _with_path(source, lambda p: _run(command, which=which, path=p, **kw))
    return code, json.loads(text)


def validate(source):
    return run("validate", source)


def check(which, source, **kw):
    return run("check", source, which, **kw)


def build(which, source, **kw):
    return run("build", source, which, **kw)


def audit(which, source, **kw):
    return run("audit", source, which, **kw)


def hierarchy(source, **kw):
    return run("hierarchy", source, **kw)
