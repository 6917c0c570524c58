import json
import random
from pathlib import Path

import pytest

from contactpairs.manifest import ManifestError, form_to_json, load, parse_form
from contactpairs.pair import verify
from contactpairs.scalar import Chart

from generators import random_chart, random_form

T4 = Path(__file__).resolve().parent.parent / "demos" / "manifests" / "t4_product.json"


def base():
    return json.loads(T4.read_text())


def test_load_path_string_and_dict():
    for src in (str(T4), T4.read_text(), base()):
        m = load(src)
        assert m.chart.names == ("th1", "th2", "th3", "phi")
        assert verify(m.pair()).passed
        assert m.settings["grid"] == 17
        assert [c["check"] for c in m.checks][:2] == ["verify", "reeb"]


def test_form_json_round_trip():
    rng = random.Random(3)
    for _ in range(30):
        chart = random_chart(rng, rng.randint(1, 5))
        a = random_form(rng, chart, rng.randint(0, chart.dim))
        assert parse_form(form_to_json(a), chart) == a


def test_frames_are_parsed():
    d = base()
    d["pairs"]["t4"]["frames"] = {"alpha": [["0", "0", "0", "1"]]}
    m = load(d)
    assert len(m.frames["t4"]["alpha"]) == 1
    d["pairs"]["t4"]["frames"] = {"gamma": [["0", "0", "0", "1"]]}
    with pytest.raises(ManifestError):
        load(d)
    d["pairs"]["t4"]["frames"] = {"alpha": [["0", "1"]]}
    with pytest.raises(ManifestError):
        load(d)


@pytest.mark.parametrize("mutate, message", [
    (lambda d: d["forms"]["alpha"]["terms"].append({"idx": [1], "coef": "1"}), "repeated"),
    (lambda d: d["forms"]["alpha"].update(degree=2), "indices"),
    (lambda d: d["forms"]["alpha"]["terms"][0].update(coef="sin(x)"), "unknown symbols"),
    (lambda d: d["maps"].update(shift=["th1", "th2"]), "map"),
    (lambda d: d["maps"].update(shift="th1"), "list"),
    (lambda d: d["curves"]["fiber"].update(components=["0", "0", "s", "t"]), "curve"),
    (lambda d: d["pairs"]["t4"].pop("h"), "missing"),
    (lambda d: d["chart"].pop("names"), "names"),
    (lambda d: d["checks"].append({"check": "nope"}), "unknown kind"),
])
def test_manifest_errors(mutate, message):
    d = base()
    mutate(d)
    with pytest.raises(ManifestError, match=message):
        load(d)


def test_pair_lookup():
    d = base()
    d["pairs"]["other"] = dict(d["pairs"]["t4"])
    m = load(d)
    with pytest.raises(ManifestError):
        m.pair()
    assert m.pair("other").name == "other"
    with pytest.raises(ManifestError):
        m.pair("third")


def test_algebra_manifests():
    alg = {"dim": 4, "brackets": [{"i": 1, "j": 4, "result": [{"k": 3, "c": "1"}]},
                                  {"i": 1, "j": 3, "result": [{"k": 2, "c": "1"}]}]}
    m = load({"algebra": alg, "pair": {"alpha": 2, "eta": 4, "h": 1, "k": 0}})
    assert m.algebra_pair.check().passed
    m = load({"algebra": alg, "pair": {"alpha": {"2": "1", "1": "1/2"}, "eta": 4, "h": 1, "k": 0}})
    assert m.algebra_pair.check().passed
    with pytest.raises(ManifestError, match="fit"):
        load({"algebra": alg, "pair": {"alpha": 2, "eta": 4, "h": 1, "k": 1}})
    with pytest.raises(ManifestError, match="pair"):
        load({"algebra": alg})
    bad = {"dim": 3, "brackets": [{"i": 1, "j": 2, "result": [{"k": 3, "c": "1"}]},
                                  {"i": 2, "j": 3, "result": [{"k": 3, "c": "1"}]},
                                  {"i": 1, "j": 3, "result": [{"k": 1, "c": "1"}]}]}
    with pytest.raises(ManifestError, match="Jacobi"):
        load({"algebra": bad, "pair": {"alpha": 1, "eta": 2, "h": 0, "k": 0}})


def test_empty_manifest():
    with pytest.raises(ManifestError):
        load({})
    with pytest.raises(ManifestError):
        load({"forms": {}})
    with pytest.raises(ManifestError):
        load("[1, 2]")


def test_chart_flags():
    m = load({"chart": {"names": ["a", "b"]}})
    assert m.chart == Chart.euclidean("a", "b")
