"""Shared fixtures: bundled categories and their (expensive) center data.

Everything heavy is session-scoped so the acceptance module and the unit
modules share one computation of each tube algebra / extraction.
"""

import pytest

from gct import (
    build_tube,
    build_twisted_tube,
    bundled_path,
    decompose,
    extract_simples,
    load_category,
    verify_G_braiding,
    verify_reverse_braiding,
)

BUNDLED = ("fib", "ising", "vec_s3", "vec_z2", "vec_z3")


@pytest.fixture(scope="session")
def cats():
    return {name: load_category(bundled_path(name)) for name in BUNDLED}


def _center(tube):
    decs, simples = {}, {}
    for g in tube.grades:
        decs[g] = decompose(tube, g)
        simples[g] = extract_simples(tube, decs[g])
    fam = [x for g in sorted(simples) for x in simples[g]]
    return {"tube": tube, "decs": decs, "simples": simples, "fam": fam}


@pytest.fixture(scope="session")
def fib_center(cats):
    return _center(build_tube(cats["fib"]))


@pytest.fixture(scope="session")
def z2_center(cats):
    cat = cats["vec_z2"]
    return _center(build_tube(cat, subcat=list(range(cat.rank))))


@pytest.fixture(scope="session")
def ising_center(cats):
    return _center(build_tube(cats["ising"]))


@pytest.fixture(scope="session")
def s3_center(cats):
    return _center(build_tube(cats["vec_s3"]))


@pytest.fixture(scope="session")
def z3_twisted(cats):
    return _center(build_twisted_tube(cats["vec_z3"], "inversion"))


@pytest.fixture(scope="session")
def z3_ext_tube(cats):
    from gct.fusion_core import build_crossed_extension
    return build_tube(build_crossed_extension(cats["vec_z3"], "inversion"))


# braiding sweeps are the slowest verifications; run each once per session


@pytest.fixture(scope="session")
def braid_reports(fib_center, z2_center, z3_twisted):
    out = {}
    for key, ctx in (("fib", fib_center), ("vec_z2", z2_center),
                     ("vec_z3^Z2", z3_twisted)):
        out[key] = {
            "forward": verify_G_braiding(ctx["fam"]),
            "reverse": verify_reverse_braiding(ctx["fam"]),
        }
    return out
