import xml.etree.ElementTree as ET

import pytest

from qcloudsim.bench import ExperimentRecord
from qcloudsim.plot import render_svg, write_svg

NS = "{http://www.w3.org/2000/svg}"


def records():
    out = []
    for backend, base in (("ionq", 0.95), ("ibm-melbourne", 0.9), ("rigetti-aspen8", 0.8)):
        out += [ExperimentRecord(backend, "swap-chain", k, 1000, int(1000 * (base - 0.05 * k)), k, 0.0)
                for k in range(1, 5)]
    return out


def test_three_series_with_backend_styles():
    root = ET.fromstring(render_svg(records()))
    groups = root.findall(f"{NS}g")
    assert [g.get("data-backend") for g in groups] == ["ibm-melbourne", "ionq", "rigetti-aspen8"]
    styles = {g.get("data-backend"): (g[1].tag.removeprefix(NS), g[1].get("fill")) for g in groups}
    assert styles == {"ionq": ("circle", "black"), "ibm-melbourne": ("rect", "blue"),
                      "rigetti-aspen8": ("polygon", "red")}
    assert all(len(g.findall(f"{NS}line")) == 4 for g in groups)


def test_single_record_and_curve():
    text = render_svg(records()[:1], curve=lambda x: 0.5)
    root = ET.fromstring(text)
    assert len(root.find(f"{NS}g").findall(f"{NS}line")) == 1
    assert root.find(f"{NS}polyline") is not None


def test_deterministic_bytes(tmp_path):
    write_svg(records(), tmp_path / "a.svg", title="swap chain")
    write_svg(records(), tmp_path / "b.svg", title="swap chain")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_errors(tmp_path):
    with pytest.raises(ValueError, match="no shots"):
        render_svg([ExperimentRecord("ionq", "spam", 0, 0, 0, 0, 0.0)])
    with pytest.raises(ValueError):
        render_svg([])
    with pytest.raises(OSError):
        write_svg(records(), tmp_path / "missing" / "x.svg")
