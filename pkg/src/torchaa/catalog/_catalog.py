"""Catalog of reference systems."""

__all__ = ["CatalogEntry", "catalog_list", "catalog_get", "catalog_names", "lift_time_dependent"]

import re

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import numpy.typing as npt

from scipy import special

from ..expr import Binary, Expression, Variable, evaluate, parse, remap_variables, to_source
from ..symplectic import IntegrableSystem


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """
    Reference system with recommended chart domain and expected data.

    Attributes
    ----------
    name : str
        Catalog name, including parameters (e.g. ``"sho(2)"``).
    system : IntegrableSystem
        First integrals.
    box : np.ndarray
        Recommended level box ``V``, shape ``(n, 2)``.
    seed : np.ndarray
        Recommended seed point with ``F(seed)`` in ``V``.
    rank : int | None
        Expected lattice rank ``m``; ``None`` when the hypotheses fail.
    actions : Callable | None
        Expected actions ``J -> I`` (noncompact first).
    periods : Callable | None
        Expected lattice basis ``J -> (n, m)`` up to column order and sign.
    provenance : str
        Where the expected data comes from.
    notes : str
        Which hypotheses the entry illustrates.

    """

    name: str
    system: IntegrableSystem
    box: npt.NDArray[float]
    seed: npt.NDArray[float]
    rank: int | None
    actions: Callable | None = None
    periods: Callable | None = None
    provenance: str = ""
    notes: str = ""
    parameters: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "box", np.asarray(self.box, dtype=float).reshape(-1, 2))
        object.__setattr__(self, "seed", np.asarray(self.seed, dtype=float))

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "system": self.system.to_dict(),
            "box": self.box.tolist(),
            "seed": self.seed.tolist(),
            "rank": self.rank,
            "provenance": self.provenance,
            "notes": self.notes,
        }
        center = self.box.mean(axis=1)
        if self.actions is not None:
            out["actions_at_center"] = np.asarray(self.actions(center)).tolist()
        if self.periods is not None:
            out["periods_at_center"] = np.asarray(self.periods(center)).T.tolist()
        return out


def lift_time_dependent(
    hamiltonian: str | Expression,
    integrals: list[str | Expression],
    name: str = "",
) -> IntegrableSystem:
    """
    Lift a time-dependent system to the extended phase space.

    Time becomes the first coordinate ``q1`` with conjugate momentum
    ``p1``; the original coordinates shift by one. The lifted system has
    ``F_1 = p1 + H(q1, q, p)`` and ``F_{k+1} = G_k(q1, q, p)``, where the
    ``G_k`` are time-dependent first integrals of ``H``. Its invariant
    manifolds are never compact along the time direction.

    Parameters
    ----------
    hamiltonian : str | Expression
        ``H(t, q, p)`` on ``n`` degrees of freedom, may use ``t``.
    integrals : list[str | Expression]
        ``n`` first integrals ``G_k(t, q, p)`` of ``H``.
    name : str, optional
        Name of the lifted system.

    Returns
    -------
    IntegrableSystem
        System with ``n + 1`` degrees of freedom.

    Examples
    --------
    >>> import torchaa
    >>> system = torchaa.catalog.lift_time_dependent("(p1^2 + q1^2)/2", ["(p1^2 + q1^2)/2"])
    >>> system.sources
    ['p1 + (p2^2 + q2^2)/2', '(p2^2 + q2^2)/2']

    """
    integrals = list(integrals)
    n = len(integrals)
    if n < 1:
        raise ValueError("at least one time-dependent first integral is required")

    def lift(source):
        if isinstance(source, Expression):
            expression = source
        else:
            expression = parse(source, n, time=True)
        if expression.dimension != n:
            raise ValueError(f"expression has {expression.dimension} degrees of freedom, expected {n}")
        return remap_variables(expression, _shift_mapping(n), n + 1)

    H = lift(hamiltonian)
    energy = Binary("+", Variable("p1", n + 1), H.root)
    lifted = [parse(to_source(energy), n + 1)] + [lift(G) for G in integrals]
    return IntegrableSystem(tuple(lifted), name)


def catalog_names() -> list[str]:
    """Base names of the catalog entries, in listing order."""
    return list(_BUILDERS)


def catalog_list() -> list[CatalogEntry]:
    """All catalog entries with default parameters, in a fixed order."""
    return [catalog_get(name) for name in _BUILDERS]


def catalog_get(name: str) -> CatalogEntry:
    """
    Look up a catalog entry.

    Parametric entries take their parameters in parentheses, e.g.
    ``"sho(2)"`` or ``"sho2(1, sqrt(2))"``; parameters are constant
    expressions.

    Raises
    ------
    ValueError
        If the name is unknown or the parameters are invalid.

    Examples
    --------
    >>> import torchaa
    >>> torchaa.catalog.catalog_get("sho(2)").system.sources
    ['(p1^2 + 4*q1^2)/2']

    """
    match = re.fullmatch(r"\s*([a-z][a-z0-9-]*)\s*(?:\((.*)\))?\s*", name)
    if match is None or match.group(1) not in _BUILDERS:
        raise ValueError(f"unknown catalog entry {name!r}; available: {', '.join(_BUILDERS)}")
    base, args = match.group(1), match.group(2)
    params = [] if args is None or not args.strip() else [_constant(a) for a in args.split(",")]
    return _BUILDERS[base](*params)


# %% subroutines
def _shift_mapping(n):
    mapping = {"t": "q1"}
    for k in range(1, n + 1):
        mapping[f"q{k}"] = f"q{k + 1}"
        mapping[f"p{k}"] = f"p{k + 1}"
    return mapping


def _constant(source):
    expression = parse(source.strip(), 1)
    if expression.variables:
        raise ValueError(f"catalog parameter {source.strip()!r} must be a constant")
    return evaluate(expression, np.zeros(2))


def _number(x):
    text = repr(float(x))
    return text[:-2] if text.endswith(".0") else text


def _positive(**values):
    for key, value in values.items():
        if not value > 0:
            raise ValueError(f"{key} must be positive, got {value}")


def _oscillator_source(k, omega):
    if omega == 1.0:
        return f"(p{k}^2 + q{k}^2)/2"
    return f"(p{k}^2 + {_number(omega * omega)}*q{k}^2)/2"


def _free():
    return CatalogEntry(
        "free",
        IntegrableSystem.from_sources(["p1"], "free"),
        [[1.0, 2.0]],
        [0.0, 1.5],
        0,
        actions=lambda J: np.asarray(J, dtype=float),
        periods=lambda J: np.zeros((1, 0)),
        provenance="translation q -> q + s; I = p, x = q",
        notes="noncompact fiber R, m = 0",
    )


def _sho(omega=1.0):
    _positive(omega=omega)
    name = "sho" if omega == 1.0 else f"sho({_number(omega)})"
    J0 = 1.25
    return CatalogEntry(
        name,
        IntegrableSystem.from_sources([_oscillator_source(1, omega)], name),
        [[0.5, 2.0]],
        [np.sqrt(2 * J0) / omega, 0.0],
        1,
        actions=lambda J: np.asarray(J, dtype=float) / omega,
        periods=lambda J: np.array([[2 * np.pi / omega]]),
        provenance="ellipse area: closed loop integral of p dq equals 2 pi E / omega",
        notes="compact fiber T^1, m = 1",
        parameters=(omega,),
    )


def _sho2(omega1=1.0, omega2=np.sqrt(2.0)):
    _positive(omega1=omega1, omega2=omega2)
    omega = np.array([omega1, omega2])
    name = f"sho2({_number(omega1)},{_number(omega2)})"
    sources = [_oscillator_source(1, omega1), _oscillator_source(2, omega2)]
    return CatalogEntry(
        name,
        IntegrableSystem.from_sources(sources, name),
        [[0.8, 1.2], [0.8, 1.2]],
        [np.sqrt(2.0) / omega1, np.sqrt(2.0) / omega2, 0.0, 0.0],
        2,
        actions=lambda J: np.asarray(J, dtype=float) / omega,
        periods=lambda J: np.diag(2 * np.pi / omega),
        provenance="per-mode ellipse areas",
        notes="compact fiber T^2, m = 2; incommensurate frequencies by default",
        parameters=(omega1, omega2),
    )


def _cylinder():
    return CatalogEntry(
        "cylinder",
        IntegrableSystem.from_sources(["p1", "(p2^2 + q2^2)/2"], "cylinder"),
        [[0.5, 1.5], [0.5, 1.5]],
        [0.0, np.sqrt(2.0), 1.0, 0.0],
        1,
        actions=lambda J: np.asarray(J, dtype=float),
        periods=lambda J: np.array([[0.0], [2 * np.pi]]),
        provenance="product of the free particle and the unit oscillator",
        notes="fiber R x T^1, m = 1 and n - m = 1",
    )


def _pendulum_action(J):
    E = np.asarray(J, dtype=float)
    m = (1 + E) / 2
    return 8 / np.pi * (special.ellipe(m) - (1 - m) * special.ellipk(m))


def _pendulum():
    J0 = 0.6
    return CatalogEntry(
        "pendulum",
        IntegrableSystem.from_sources(["p1^2/2 - cos(q1)"], "pendulum"),
        [[0.3, 0.9]],
        [0.0, np.sqrt(2 * (J0 + 1))],
        1,
        actions=_pendulum_action,
        periods=lambda J: np.array([[4 * special.ellipk((1 + float(np.ravel(J)[0])) / 2)]]),
        provenance="complete elliptic integrals with parameter (1 + E) / 2",
        notes="libration below the separatrix, m = 1",
    )


def _pendulum_rotation():
    J0 = 2.0
    return CatalogEntry(
        "pendulum-rotation",
        IntegrableSystem.from_sources(["p1^2/2 - cos(q1)"], "pendulum-rotation"),
        [[1.5, 2.5]],
        [0.0, np.sqrt(2 * (J0 + 1))],
        0,
        actions=lambda J: np.asarray(J, dtype=float),
        periods=lambda J: np.zeros((1, 0)),
        provenance="rotation on unbounded q never returns",
        notes="nonlinear noncompact fiber R, m = 0",
    )


def _extended_time():
    system = lift_time_dependent("(p1^2 + q1^2)/2", ["(p1^2 + q1^2)/2"], "extended-time")
    return CatalogEntry(
        "extended-time",
        system,
        [[0.5, 1.5], [0.5, 1.5]],
        [0.0, np.sqrt(2.0), 0.0, 0.0],
        1,
        actions=lambda J: np.asarray(J, dtype=float),
        periods=lambda J: np.array([[0.0], [2 * np.pi]]),
        provenance="oscillator lifted to the extended phase space",
        notes="time-dependent system, fiber R x T^1 never compact",
    )


def _noninvolutive():
    return CatalogEntry(
        "noninvolutive",
        IntegrableSystem.from_sources(["q1", "p1"], "noninvolutive"),
        [[0.5, 1.5], [0.5, 1.5]],
        [1.0, 0.0, 1.0, 0.0],
        None,
        provenance="{q1, p1} = 1",
        notes="negative test: the integrals do not commute",
    )


_BUILDERS = {
    "free": _free,
    "sho": _sho,
    "sho2": _sho2,
    "cylinder": _cylinder,
    "pendulum": _pendulum,
    "pendulum-rotation": _pendulum_rotation,
    "extended-time": _extended_time,
    "noninvolutive": _noninvolutive,
}
