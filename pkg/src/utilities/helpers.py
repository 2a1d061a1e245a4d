import hashlib
import json
import re
from pathlib import Path

import numpy as np
import pandas as pd
import yaml
from scipy.interpolate import CubicSpline

from src.error_trace.exceptions import DomainError
from src.services.monopole_triplet_module.iso_algebra import GAMMA, cyclic_generators, gamma5, parity_kernel, spin_kernel
from src.services.monopole_triplet_module.monopole_gauges import MonopoleProfile, builtin_profiles
from src.services.monopole_triplet_module.quantum_numbers import HalfInt


def load_yaml_file(file_path):
    """
    Reads a YAML file and returns its contents as a Python dictionary.
    """
    with open(file_path, "r", encoding="utf-8") as file:
        data = yaml.safe_load(file)
    return data


def parse_complex(text: str | float | complex) -> complex:
    """
    Parse ``a+bi`` style numbers: ``0.3``, ``1+0.5i``, ``-2i``, ``0.3-0.2j``.
    """
    if isinstance(text, (int, float, complex)):
        return complex(text)
    raw = re.sub(r"\s+", "", str(text)).replace("i", "j")
    try:
        return complex(raw)
    except ValueError as e:
        raise DomainError(f"not a complex number: {text!r}") from e


def parse_half_int(text: str | int) -> HalfInt:
    """``3/2``, ``1.5`` or ``2`` to a HalfInt; anything off the half-integer lattice raises."""
    return HalfInt.of(text)


def load_profile_table(path: str | Path) -> CubicSpline:
    """
    Two-column whitespace-separated text (r, value), ``#`` comments allowed.
    Returns a cubic spline over the tabulated range.
    """
    frame = pd.read_csv(path, sep=r"\s+", comment="#", header=None, names=["r", "value"], engine="python")
    frame = frame.dropna().sort_values("r").drop_duplicates("r")
    if len(frame) < 4:
        raise DomainError(f"profile table {path} needs at least four rows, found {len(frame)}")
    return CubicSpline(frame["r"].to_numpy(dtype=float), frame["value"].to_numpy(dtype=float))


def parse_profile_spec(spec: str, kappa: float = 0.0, e: float = 1.0) -> MonopoleProfile:
    """
    ``trivial``, ``bps`` / ``bps:<mu>``, or ``table:W=<path>[,F=<path>][,Phi=<path>]``.
    """
    name, _, rest = spec.strip().partition(":")
    name = name.lower()
    if name == "trivial":
        return builtin_profiles("trivial", e=e, kappa=kappa)
    if name == "bps":
        try:
            mu = float(rest) if rest else 1.0
        except ValueError as err:
            raise DomainError(f"bad BPS scale in profile spec {spec!r}") from err
        return builtin_profiles("bps", mu=mu, e=e, kappa=kappa)
    if name == "table":
        tables = {}
        for item in filter(None, rest.split(",")):
            key, _, path = item.partition("=")
            if key not in ("W", "F", "Phi") or not path:
                raise DomainError(f"bad table entry {item!r} in profile spec {spec!r}")
            tables[key] = load_profile_table(path)
        return builtin_profiles("custom", e=e, kappa=kappa, tables=tables)
    raise DomainError(f"unknown profile spec {spec!r}")


def config_hash(payload: dict) -> str:
    """sha256 over the key-sorted JSON form."""
    text = json.dumps(payload, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def named_matrix(name: str) -> np.ndarray:
    """Matrices addressable by name in observable catalogs."""
    t1, t2, t3 = cyclic_generators()
    table = {
        "I3": np.eye(3, dtype=complex),
        "I4": np.eye(4, dtype=complex),
        "t1": t1,
        "t2": t2,
        "t3": t3,
        "gamma0": GAMMA[0],
        "gamma1": GAMMA[1],
        "gamma2": GAMMA[2],
        "gamma3": GAMMA[3],
        "gamma5": gamma5(),
        "parity": parity_kernel(),
        "spin": spin_kernel(),
    }
    if name not in table:
        raise DomainError(f"unknown matrix name {name!r}")
    return table[name]
