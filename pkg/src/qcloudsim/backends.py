"""Backend configuration files: topology, native gate set, passes and noise.

Each backend is a flat INI file with one section per noise channel. The
search directory defaults to the packaged presets and can be overridden with
the ``QCLOUDSIM_CONFIG_DIR`` environment variable.
"""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .gates import NativeGateSet, native_set
from .noise import (CrosstalkModel, DepolarizingModel, NoiseProfile, QuasiStaticCoherentModel,
                    SpamModel)
from .topology import TopologyGraph, load_topology, preset
from .transpiler import DEFAULT_PASSES, PASSES

CONFIG_ENV = "QCLOUDSIM_CONFIG_DIR"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BackendConfig:
    name: str
    topology: TopologyGraph
    native: NativeGateSet
    profile: NoiseProfile
    passes: tuple[str, ...] = DEFAULT_PASSES
    topology_ref: str = ""

    def with_profile(self, **changes) -> "BackendConfig":
        return replace(self, profile=replace(self.profile, **changes))


def config_dir() -> Path:
    env = os.environ.get(CONFIG_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("qcloudsim.data.backends")))


def _float(section, key, default=0.0) -> float:
    return section.getfloat(key, fallback=default)


def parse_backend(text: str, base_dir: Path | None = None) -> BackendConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.read_string(text)
    if "backend" not in cp:
        raise ConfigError("missing [backend] section")
    b = cp["backend"]
    name = b.get("name")
    topo_ref = b.get("topology")
    if not name or not topo_ref:
        raise ConfigError("[backend] needs name and topology")
    candidate = (base_dir / topo_ref) if base_dir is not None else None
    try:
        topology = load_topology(candidate) if candidate is not None and candidate.is_file() else preset(topo_ref)
    except ValueError as e:
        raise ConfigError(f"backend {name}: {e}") from None
    try:
        native = native_set(b.get("native", ""))
    except ValueError as e:
        raise ConfigError(f"backend {name}: {e}") from None
    passes = tuple(p.strip() for p in b.get("passes", ",".join(DEFAULT_PASSES)).split(",") if p.strip())
    for p in passes:
        if p not in PASSES:
            raise ConfigError(f"backend {name}: unknown pass {p!r}")

    empty = configparser.SectionProxy(cp, "DEFAULT")
    spam = cp["spam"] if "spam" in cp else empty
    dep = cp["depolarizing"] if "depolarizing" in cp else empty
    coh = cp["coherent"] if "coherent" in cp else empty
    ct = cp["crosstalk"] if "crosstalk" in cp else empty
    p1 = dep.get("p1")
    profile = NoiseProfile(
        spam=SpamModel(_float(spam, "p_read_0"), _float(spam, "p_read_1")),
        depol=DepolarizingModel(_float(dep, "p2"), None if p1 in (None, "", "auto") else float(p1)),
        coherent=QuasiStaticCoherentModel(_float(coh, "sigma"), coh.get("axis", "native"),
                                          _float(coh, "offset"), _float(coh, "run_sigma")),
        crosstalk=CrosstalkModel(_float(ct, "p_ct")),
        topology=topology,
    )
    return BackendConfig(name, topology, native, profile, passes, topo_ref)


def dumps_backend(cfg: BackendConfig) -> str:
    p = cfg.profile
    lines = [
        "[backend]",
        f"name = {cfg.name}",
        f"topology = {cfg.topology_ref or cfg.topology.name}",
        f"native = {cfg.native.name}",
        f"passes = {', '.join(cfg.passes)}",
        "",
        "[spam]",
        f"p_read_0 = {p.spam.p_read_0!r}",
        f"p_read_1 = {p.spam.p_read_1!r}",
        "",
        "[depolarizing]",
        f"p2 = {p.depol.p2!r}",
        f"p1 = {'auto' if p.depol.p1 is None else repr(p.depol.p1)}",
        "",
        "[coherent]",
        f"sigma = {p.coherent.sigma!r}",
        f"axis = {p.coherent.axis}",
        f"offset = {p.coherent.offset!r}",
        f"run_sigma = {p.coherent.run_sigma!r}",
        "",
        "[crosstalk]",
        f"p_ct = {p.crosstalk.p_ct!r}",
    ]
    return "\n".join(lines) + "\n"


def backend_files(directory: Path | None = None) -> dict[str, Path]:
    """Map every accepted backend name (file stem and ``name`` key) to its file."""
    directory = config_dir() if directory is None else Path(directory)
    found: dict[str, Path] = {}
    for path in sorted(directory.glob("*.ini")):
        found[path.stem] = path
        cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        cp.read(path)
        if cp.has_option("backend", "name"):
            found.setdefault(cp.get("backend", "name"), path)
    return found


def load_backend(name: str, directory: Path | None = None) -> BackendConfig:
    path = Path(name)
    if path.suffix == ".ini" and path.is_file():
        return parse_backend(path.read_text(), path.parent)
    files = backend_files(directory)
    if name not in files:
        raise ConfigError(f"unknown backend {name!r}; available: {', '.join(sorted(files))}")
    return parse_backend(files[name].read_text(), files[name].parent)
