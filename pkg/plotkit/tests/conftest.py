"""Session-scoped input fixtures generated with the simulation CLI."""
import json
from pathlib import Path

import pytest

from pxpfloquet.cli import main as sim_main
from pxpfloquet.io import write_csv


def _run(*argv):
    assert sim_main(list(argv)) == 0


@pytest.fixture(scope="session")
def data_dir(tmp_path_factory) -> Path:
    """Small but real simulation outputs covering every input schema."""
    root = tmp_path_factory.mktemp("simdata")
    _run("dynamics", "--L", "8", "--lambda", "15", "--omega", "15",
         "--nmax", "128", "--out", str(root / "dyn_hi"))
    _run("dynamics", "--L", "8", "--lambda", "15", "--omega", "7.75",
         "--nmax", "128", "--out", str(root / "dyn_lo"))
    _run("spectrum", "--L", "8", "--lambda", "15", "--omega", "15",
         "--out", str(root / "spec_hi"))
    _run("spectrum", "--L", "8", "--lambda", "15", "--omega", "7.75",
         "--out", str(root / "spec_lo"))
    _run("norms", "--L", "8", "--lambda", "15", "--omega-min", "10",
         "--omega-max", "40", "--omega-step", "5", "--out", str(root / "norms15"))
    _run("norms", "--L", "8", "--lambda", "20", "--omega-min", "10",
         "--omega-max", "40", "--omega-step", "5", "--out", str(root / "norms20"))
    _run("sweep", "--L", "10", "--lambda-list", "15", "--omega-min", "8",
         "--omega-max", "9", "--omega-step", "0.5", "--out", str(root / "sweep"))
    _run("levelstats", "--L", "12", "--lambda", "15", "--omega", "7.8",
         "--out", str(root / "rstat"))
    # scar-gap overlay table in the layout the gap figure consumes
    write_csv(root / "gap.csv", ("omega", "w_R_measured", "w_R_predicted"),
              [(15.0, 2.35123456789, 2.38310987654),
               (20.0, 2.79234567891, 2.80145678912),
               (30.0, 3.21345678912, 3.21456789123),
               (60.0, 3.60456789123, 3.60467891234)],
              {"lambda": 15.0, "L": 18})
    return root


@pytest.fixture(scope="session")
def gap_csv(data_dir):
    return data_dir / "gap.csv"
