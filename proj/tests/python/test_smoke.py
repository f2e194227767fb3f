import json
import math
import os
from pathlib import Path

import numpy as np
import pytest

import excitran

DATA = Path(os.environ.get("EXCITRAN_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def graph(name):
    return excitran.load_site_graph(DATA / "graphs" / f"{name}.json")


def test_single_site_efficiency():
    g = graph("single_site")
    model = excitran.LindbladModel(g, 0.0, 0.001, excitran.TrapSpec("site_based", ["s1"], rate_ps=1.0))
    rho0 = excitran.localized(1, 0)
    for method in ("resolvent", "quadrature"):
        r = excitran.efficiency(model, rho0, method)
        assert r["eta"] == pytest.approx(1 / 1.001, abs=1e-6)
        assert r["tau_ps"] == pytest.approx(1 / 2.002, abs=1e-6)
        assert r["method"] == method


def test_spectrum_of_degenerate_dimer():
    energies, vectors = excitran.spectrum(graph("dimer_degenerate"))
    assert energies == pytest.approx([-100.0, 100.0])
    assert abs(vectors[0, 0]) == pytest.approx(1 / math.sqrt(2))


def test_propagation_and_observables():
    g = graph("dimer_degenerate")
    model = excitran.LindbladModel(g, 0.0, 0.0)
    traj = excitran.propagate(model, excitran.localized(2, 0), [0.0, 0.05, 0.1])
    assert len(traj) == 3
    for rho in traj:
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-9)
        assert excitran.concurrence(rho, 0, 1) <= 1.0 + 1e-12
        assert excitran.mutual_information(rho, [0], [1]) >= -1e-12
    assert excitran.negativity(np.diag([0.5, 0.5]).astype(complex), [0], [1]) == 0.0
    assert excitran.delocalization(np.eye(4, dtype=complex) / 4) == pytest.approx(math.log(4))


def test_oligomer_assembly():
    toy = graph("lhcii_toy")
    trimer = excitran.assemble_oligomer(toy, 3, "ring", [("b601", "b609", 42.0)])
    assert trimer.n_sites == 3 * toy.n_sites
    assert trimer.labels[0].endswith("_0")


def test_errors_are_translated():
    with pytest.raises(excitran.Error):
        excitran.parse_site_graph('{"sites": []}')
    with pytest.raises(excitran.Error):
        excitran.dephasing_from_temperature(-1.0)


def test_temperature_map_is_linear():
    assert excitran.dephasing_from_temperature(154.0) == 2 * excitran.dephasing_from_temperature(77.0)


def test_fit_recovers_timescales():
    t = np.linspace(0, 15, 200)
    d = 2.5 - 1.2 * np.exp(-t / 0.25) - 0.8 * np.exp(-t / 2.68)
    f = excitran.fit_timescales(t.tolist(), d.tolist())
    assert f["t1_ps"] == pytest.approx(0.25, rel=0.01)
    assert f["t2_ps"] == pytest.approx(2.68, rel=0.01)


def test_run_command(tmp_path):
    summary = excitran.run_command("sweep", DATA / "configs" / "funnel3_sweep.json", out=tmp_path, threads=1)
    assert summary["command"] == "sweep"
    assert (tmp_path / "sweep.csv").exists()
    resolved = json.loads((tmp_path / "sweep.config.json").read_text())
    assert resolved["gamma_recomb_ps"] == 0.05
    assert "sweep" in excitran.commands
