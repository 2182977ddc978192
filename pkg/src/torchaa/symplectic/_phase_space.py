"""Phase space and integrable system containers."""

__all__ = ["PhaseSpace", "IntegrableSystem", "LevelValue"]

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt
import torch

from ..base import autocast, broadcast, jacfwd
from ..base.errors import ExpressionDomainError
from ..expr import Expression, eval_with_gradient, evaluate, evaluate_torch, parse


@dataclass(frozen=True)
class PhaseSpace:
    """
    Phase space ``R^{2n}`` with its canonical symplectic form.

    Coordinates are ordered ``(q1..qn, p1..pn)`` and the symplectic
    matrix is ``Omega0 = [[0, -Id], [Id, 0]]``, i.e. ``Omega = sum dp ^ dq``.

    Parameters
    ----------
    n : int
        Number of degrees of freedom.

    """

    n: int

    def __post_init__(self):
        if int(self.n) < 1:
            raise ValueError(f"number of degrees of freedom must be >= 1, got {self.n}")

    @property
    def dim(self) -> int:
        """Dimension ``2n`` of the phase space."""
        return 2 * self.n

    @property
    def omega(self) -> npt.NDArray[float]:
        """Canonical symplectic matrix ``Omega0``."""
        eye = np.eye(self.n)
        zero = np.zeros((self.n, self.n))
        return np.block([[zero, -eye], [eye, zero]])

    @property
    def coordinate_names(self) -> list[str]:
        """Coordinate names in storage order."""
        return [f"q{k + 1}" for k in range(self.n)] + [f"p{k + 1}" for k in range(self.n)]


@dataclass(frozen=True)
class LevelValue:
    """
    Values ``J`` of the first integrals on a level set.

    Parameters
    ----------
    J : ArrayLike
        Level values, one per first integral.

    """

    J: npt.NDArray[float]

    def __post_init__(self):
        J = np.atleast_1d(np.asarray(self.J, dtype=float))
        if J.ndim != 1 or not np.all(np.isfinite(J)):
            raise ValueError("level value must be a finite vector")
        object.__setattr__(self, "J", J)

    def __array__(self, dtype=None, copy=None):
        return self.J.astype(dtype) if dtype is not None else self.J

    def __len__(self) -> int:
        return self.J.size


@dataclass(frozen=True, eq=False)
class IntegrableSystem:
    """
    Completely integrable system: ``n`` first integrals on ``R^{2n}``.

    Involution of the integrals is not assumed here; it is checked by
    :func:`torchaa.symplectic.check_involution`.

    Parameters
    ----------
    integrals : tuple[Expression, ...]
        First integrals ``F_1..F_n``.
    name : str, optional
        Human-readable name.

    """

    integrals: tuple[Expression, ...]
    name: str = ""
    phase_space: PhaseSpace = field(init=False)

    def __post_init__(self):
        integrals = tuple(self.integrals)
        if not integrals:
            raise ValueError("an integrable system needs at least one first integral")
        n = integrals[0].dimension
        for F in integrals:
            if F.dimension != n or F.time:
                raise ValueError("all first integrals must live on the same autonomous phase space")
        if len(integrals) != n:
            raise ValueError(
                f"{n} degrees of freedom need exactly {n} first integrals, got {len(integrals)}"
            )
        object.__setattr__(self, "integrals", integrals)
        object.__setattr__(self, "phase_space", PhaseSpace(n))

    @classmethod
    def from_sources(cls, sources: list[str], name: str = "") -> "IntegrableSystem":
        """
        Parse a system from expression sources.

        The number of degrees of freedom equals the number of sources.
        """
        n = len(sources)
        return cls(tuple(parse(source, n) for source in sources), name)

    @property
    def n(self) -> int:
        """Number of degrees of freedom."""
        return self.phase_space.n

    @property
    def dim(self) -> int:
        """Phase space dimension ``2n``."""
        return self.phase_space.dim

    @cached_property
    def sources(self) -> list[str]:
        """Printed expression sources of the first integrals."""
        return [F.source or F.to_source() for F in self.integrals]

    def values(self, z: npt.ArrayLike) -> npt.NDArray[float]:
        """Evaluate ``F(z)``."""
        return np.array([evaluate(F, z) for F in self.integrals])

    def level(self, z: npt.ArrayLike) -> LevelValue:
        """Level value through ``z``."""
        return LevelValue(self.values(z))

    def jacobian(self, z: npt.ArrayLike) -> tuple[npt.NDArray[float], npt.NDArray[float]]:
        """
        Evaluate the integrals and their ``n x 2n`` Jacobian at ``z``.

        Returns
        -------
        values : np.ndarray
            ``F(z)`` of shape ``(n,)``.
        jacobian : np.ndarray
            ``dF(z)`` of shape ``(n, 2n)``.

        """
        out = [eval_with_gradient(F, z) for F in self.integrals]
        return np.array([v for v, _ in out]), np.stack([g for _, g in out])

    def batch_jacobian(self, points: npt.ArrayLike) -> tuple[torch.Tensor, torch.Tensor]:
        """
        Vectorized integrals and Jacobians.

        Parameters
        ----------
        points : ArrayLike
            Points of shape ``(..., 2n)``.

        Returns
        -------
        values : torch.Tensor
            Values of shape ``(..., n)``.
        jacobian : torch.Tensor
            Jacobians of shape ``(..., n, 2n)``.

        """
        return _batch_jacobian(points, self)

    def to_dict(self) -> dict:
        """Serializable description of the system."""
        return {"name": self.name, "dimension": self.n, "integrals": list(self.sources)}

    @classmethod
    def from_dict(cls, data: dict) -> "IntegrableSystem":
        """Inverse of :meth:`to_dict`."""
        system = cls.from_sources(list(data["integrals"]), data.get("name", ""))
        if system.n != int(data.get("dimension", system.n)):
            raise ValueError("dimension does not match the number of integrals")
        return system


# %% subroutines
@autocast
@broadcast
def _batch_jacobian(points, system):
    if points.shape[-1] != system.dim:
        raise ValueError(f"points have {points.shape[-1]} coordinates, expected {system.dim}")

    @jacfwd(argnums=0)
    def _values(z):
        return torch.stack([evaluate_torch(F, z) for F in system.integrals])

    values, jac = _values(points)
    if not (torch.isfinite(values).all() and torch.isfinite(jac).all()):
        raise ExpressionDomainError(f"first integrals of {system.name or 'system'} are not finite")

    return values, jac
