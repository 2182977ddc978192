"""Job configuration of the command-line front end."""

__all__ = ["JobConfig", "load_config"]

import dataclasses
import json

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt

from ..base.config import (
    ChartOptions,
    EmitOptions,
    GaugeOptions,
    IntegratorOptions,
    LatticeOptions,
    VerifyOptions,
)
from ..base.errors import ActionAngleError, ConfigError
from ..catalog import catalog_get, lift_time_dependent
from ..chart import level_box
from ..symplectic import IntegrableSystem

_SECTIONS = {
    "integrator": IntegratorOptions,
    "lattice": LatticeOptions,
    "chart": ChartOptions,
    "gauge": GaugeOptions,
    "verify": VerifyOptions,
    "emit": EmitOptions,
}
_TOP_KEYS = {
    "system",
    "box",
    "seed",
    "expected_rank",
    "involution_tol",
    "involution_samples",
    "output",
    "rng_seed",
    *_SECTIONS,
}
_SYSTEM_KEYS = {"catalog", "integrals", "dimension", "name", "hamiltonian"}


@dataclass(frozen=True, eq=False)
class JobConfig:
    """
    One batch job: a system, its chart domain and every stage option.

    Attributes
    ----------
    system : IntegrableSystem
        First integrals.
    box : np.ndarray
        Level box ``V`` of shape ``(n, 2)``.
    seed : np.ndarray
        Seed point with ``F(seed)`` in ``V``.
    catalog : str | None
        Catalog name the system was taken from.
    expected_rank : int | None
        Required lattice rank.
    involution_tol : float
        Admissible Poisson bracket of the integrals.
    involution_samples : int
        Sample points of the involution check.
    output : Path
        Output directory.
    rng_seed : int
        Seed of every random sample placement.
    integrator, lattice, chart, gauge, verify, emit
        Stage options.

    """

    system: IntegrableSystem
    box: npt.NDArray[float]
    seed: npt.NDArray[float]
    catalog: str | None = None
    expected_rank: int | None = None
    involution_tol: float = 1e-10
    involution_samples: int = 32
    output: Path = Path("torchaa-out")
    rng_seed: int = 0
    integrator: IntegratorOptions = field(default_factory=IntegratorOptions)
    lattice: LatticeOptions = field(default_factory=LatticeOptions)
    chart: ChartOptions = field(default_factory=ChartOptions)
    gauge: GaugeOptions = field(default_factory=GaugeOptions)
    verify: VerifyOptions = field(default_factory=VerifyOptions)
    emit: EmitOptions = field(default_factory=EmitOptions)

    def __post_init__(self):
        n = self.system.n
        try:
            box = level_box(self.box, n)
        except ValueError as err:
            raise ConfigError(f"box: {err}") from err
        seed = np.asarray(self.seed, dtype=float).reshape(-1)
        if seed.size != 2 * n:
            raise ConfigError(f"seed must have {2 * n} coordinates, got {seed.size}")
        if not np.all(np.isfinite(seed)):
            raise ConfigError("seed must be finite")
        if not self.involution_tol > 0:
            raise ConfigError(f"involution_tol must be positive, got {self.involution_tol}")
        if self.involution_samples < 0:
            raise ConfigError("involution_samples must be non-negative")
        if self.expected_rank is not None and not 0 <= self.expected_rank <= n:
            raise ConfigError(f"expected_rank must be in [0, {n}], got {self.expected_rank}")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "output", Path(self.output))

    @property
    def rng(self) -> np.random.Generator:
        """Fresh generator seeded with :attr:`rng_seed`."""
        return np.random.default_rng(self.rng_seed)

    def replace(self, **changes) -> "JobConfig":
        """Return a copy with ``changes`` applied."""
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dict(cls, data: dict, base_dir: str | Path | None = None) -> "JobConfig":
        """
        Build a job from its JSON document.

        Parameters
        ----------
        data : dict
            Parsed configuration.
        base_dir : str | Path, optional
            Directory relative output paths are resolved against.

        Raises
        ------
        ConfigError
            On unknown keys, missing fields or invalid values.

        """
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        _reject_unknown(data, _TOP_KEYS, "configuration")
        if "system" not in data:
            raise ConfigError("configuration: missing key 'system'")
        name, system, defaults = _system(data["system"])

        box = data.get("box", None if defaults is None else defaults.box)
        seed = data.get("seed", None if defaults is None else defaults.seed)
        if box is None or seed is None:
            raise ConfigError("box and seed are required for inline systems")

        kwargs = {}
        for key, options_cls in _SECTIONS.items():
            kwargs[key] = _options(options_cls, data.get(key, {}), key)
        expected_rank = data.get("expected_rank")
        if expected_rank is None and "expected_rank" not in data and defaults is not None:
            expected_rank = defaults.rank

        output = Path(data.get("output", "torchaa-out"))
        if base_dir is not None and not output.is_absolute():
            output = Path(base_dir) / output
        try:
            return cls(
                system,
                _array(box, "box"),
                _array(seed, "seed"),
                catalog=name,
                expected_rank=None if expected_rank is None else int(expected_rank),
                involution_tol=float(data.get("involution_tol", 1e-10)),
                involution_samples=int(data.get("involution_samples", 32)),
                output=output,
                rng_seed=int(data.get("rng_seed", 0)),
                **kwargs,
            )
        except (TypeError, ValueError) as err:
            raise ConfigError(str(err)) from err

    def to_dict(self) -> dict:
        """Full provenance of the job, defaults included."""
        out = {
            "system": self.system.to_dict(),
            "catalog": self.catalog,
            "box": self.box.tolist(),
            "seed": self.seed.tolist(),
            "expected_rank": self.expected_rank,
            "involution_tol": self.involution_tol,
            "involution_samples": self.involution_samples,
            "rng_seed": self.rng_seed,
        }
        for key in _SECTIONS:
            out[key] = getattr(self, key).asdict()
        return out


def load_config(path: str | Path) -> JobConfig:
    """
    Read a job configuration file.

    Relative output directories are resolved against the directory of
    the configuration file.

    Raises
    ------
    ConfigError
        If the file cannot be read or parsed, or the job is invalid.

    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as err:
        raise ConfigError(f"cannot read configuration {path}: {err.strerror}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from err
    return JobConfig.from_dict(data, base_dir=path.parent)


# %% subroutines
def _reject_unknown(data, allowed, where):
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(map(repr, unknown))}")


def _array(value, where):
    try:
        return np.asarray(value, dtype=float)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"{where} must be numeric") from err


def _options(options_cls, values, where):
    if not isinstance(values, dict):
        raise ConfigError(f"{where}: options must be a JSON object")
    names = {f.name for f in dataclasses.fields(options_cls)}
    _reject_unknown(values, names, where)
    values = {key: tuple(v) if isinstance(v, list) else v for key, v in values.items()}
    try:
        return options_cls(**values)
    except (TypeError, ValueError) as err:
        raise ConfigError(f"{where}: {err}") from err


def _system(spec):
    if isinstance(spec, str):
        spec = {"catalog": spec}
    if not isinstance(spec, dict):
        raise ConfigError("system must be a catalog name or a JSON object")
    _reject_unknown(spec, _SYSTEM_KEYS, "system")

    try:
        if "catalog" in spec:
            if set(spec) - {"catalog"}:
                raise ConfigError("system: 'catalog' cannot be combined with inline integrals")
            entry = catalog_get(spec["catalog"])
            return spec["catalog"], entry.system, entry

        if "integrals" not in spec:
            raise ConfigError("system: either 'catalog' or 'integrals' is required")
        integrals = spec["integrals"]
        if not isinstance(integrals, list) or not all(isinstance(s, str) for s in integrals):
            raise ConfigError("system: 'integrals' must be a list of expression strings")
        name = spec.get("name", "")
        if "hamiltonian" in spec:
            system = lift_time_dependent(spec["hamiltonian"], integrals, name)
            n = system.n - 1
        else:
            system = IntegrableSystem.from_sources(integrals, name)
            n = system.n
    except ActionAngleError as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"system: {err}") from err
    except ValueError as err:
        raise ConfigError(f"system: {err}") from err

    if "dimension" in spec and int(spec["dimension"]) != n:
        raise ConfigError(f"system: dimension {spec['dimension']} does not match {n} integrals")
    return None, system, None
