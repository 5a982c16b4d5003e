import json

import pytest

from hptransmission.pipeline import RunConfig, run_single, solution_dump

from conftest import cached_run


def test_record_fields():
    sol = cached_run(0.01, 4)
    rec = sol.record
    assert rec.N == sol.space.N
    assert rec.err_energy_rel == pytest.approx(rec.err_energy_abs / 3.5382901853940627, rel=1e-10)
    assert rec.runtime_ms > 0
    assert 0 < rec.err_l2 < rec.err_energy_abs


def test_error_bounded_uniformly_in_eps():
    # the layer error shrinks with eps, so the error at small eps never exceeds the eps=1e-2 one
    errs = [cached_run(eps, 8).record.err_energy_abs for eps in (1e-2, 1e-4, 1e-6)]
    assert errs[0] >= errs[1] >= errs[2]
    counts = {len(cached_run(eps, 8).mesh.elements) for eps in (1e-2, 1e-4, 1e-6)}
    assert counts == {7 * 16}


def test_asymptotic_regime_is_accurate():
    rec = cached_run(0.5, 8).record
    assert cached_run(0.5, 8).mesh.regime == "asymptotic"
    assert rec.err_energy_rel < 1e-7


def test_nonzero_flux():
    rec = run_single(RunConfig(h=0.7, sectors=8), 0.01, 6).record
    assert rec.err_energy_rel < 1e-2


@pytest.mark.parametrize("kw", [dict(eps=()), dict(p=(0,)), dict(case="x"), dict(sectors=3),
                                dict(kappa=0.0), dict(radii=(1, 3, 2)), dict(eps=(2.0,))])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        RunConfig(**kw)


def test_solution_dump_roundtrip():
    sol = cached_run(0.01, 2)
    doc = json.loads(json.dumps(solution_dump(sol)))
    assert len(doc["u"]) == sol.space.n_grid
    assert max(doc["u"]) == pytest.approx(sol.field.values.max())
