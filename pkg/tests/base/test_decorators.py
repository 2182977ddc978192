"""Test tensor conversion, batching and Jacobian decorators."""

import numpy as np
import torch

from torchaa.base import autocast, broadcast, jacfwd


@autocast
def _scaled(x, scale=2.0, label="x"):
    assert isinstance(label, str)
    return x * scale


def test_autocast_arrays():
    out = _scaled(np.array([1.0, 2.0], dtype=np.float32))
    assert isinstance(out, torch.Tensor)
    assert out.dtype == torch.float64
    torch.testing.assert_close(out, torch.tensor([2.0, 4.0], dtype=torch.float64))


def test_autocast_sequences_and_passthrough():
    out = _scaled([1, 2], label="y")
    assert out.dtype == torch.float64
    out = _scaled(torch.tensor([1.0]), scale=torch.tensor([3.0]))
    torch.testing.assert_close(out, torch.tensor([3.0], dtype=torch.float64))


@broadcast
def _norms(points):
    return points.norm(dim=-1), points[:, :1]


def test_broadcast_batch_shape():
    points = torch.ones(3, 4, 2)
    norms, first = _norms(points)
    assert norms.shape == (3, 4)
    assert first.shape == (3, 4, 1)
    torch.testing.assert_close(norms, torch.full((3, 4), 2.0**0.5))


def test_broadcast_single_point():
    norms, first = _norms(torch.tensor([3.0, 4.0]))
    assert norms.shape == ()
    assert float(norms) == 5.0
    assert first.shape == (1,)


@jacfwd(argnums=0)
def _square(x):
    return x**2


@jacfwd(argnums=1, batched=False)
def _weighted(w, x):
    return w * x.sum()


def test_jacfwd_batched():
    x = torch.tensor([[1.0, 2.0], [3.0, 4.0]], dtype=torch.float64)
    value, jac = _square(x)
    torch.testing.assert_close(value, x**2)
    assert jac.shape == (2, 2, 2)
    torch.testing.assert_close(jac[1], torch.diag(2 * x[1]))


def test_jacfwd_argnums():
    w = torch.tensor([1.0, 2.0], dtype=torch.float64)
    x = torch.tensor([1.0, 1.0, 1.0], dtype=torch.float64)
    value, jac = _weighted(w, x)
    torch.testing.assert_close(value, 3 * w)
    torch.testing.assert_close(jac, torch.outer(w, torch.ones(3, dtype=torch.float64)))
