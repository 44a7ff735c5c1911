import io

import pytest

from latpoly.cli.classify import run_class
from latpoly.cli.poly import run_poly


def poly(args, text=""):
    """Run the polytope CLI on ``text``; returns (exit code, stdout)."""
    out = io.StringIO()
    rc = run_poly(list(args), stdin=io.StringIO(text), stdout=out)
    return rc, out.getvalue()


def klass(args, text=""):
    out = io.StringIO()
    rc = run_class(list(args), stdin=io.StringIO(text), stdout=out)
    return rc, out.getvalue()


@pytest.fixture
def run_poly_cli():
    return poly


@pytest.fixture
def run_class_cli():
    return klass
