#!/usr/bin/env python3
"""
Zero set of the Fourier transform of the normalized cross measure

    rho = 1/2 Leb[t1, t1+T1] x delta_0  +  1/2 delta_0 x Leb[t2, t2+T2],   T1 + T2 = 2.

rho-hat(l) vanishes on Z1 = ((Z\\0)/T1) x ((Z\\0)/T2) and on Z2, the set where
T(l) = l1(2t1+T1) - l2(2t2+T2) is an integer and

    (-1)^T(l) sin(pi T1 l1)/(pi l1) + sin(pi T2 l2)/(pi l2) = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, NamedTuple

import numpy as np

from config import DEFAULT_TOL
from measure import AffineMap, Measure, Point, SegmentPiece, fourier_eval
from scalar import ExactScalar, InputError, as_scalar


@dataclass(frozen=True)
class CrossConfig:
    t1: ExactScalar
    t2: ExactScalar
    T1: ExactScalar
    T2: ExactScalar
    provenance: AffineMap | None = None

    def __post_init__(self) -> None:
        for name in ("t1", "t2", "T1", "T2"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if self.T1.sign() <= 0 or self.T2.sign() <= 0:
            raise ValueError(f"segment lengths must be positive, got T1={self.T1}, T2={self.T2}")
        if self.T1 + self.T2 != 2:
            raise ValueError(f"lengths must sum to 2, got {self.T1 + self.T2}")

    @classmethod
    def of(cls, t1: Any, t2: Any, T1: Any, T2: Any) -> CrossConfig:
        return cls(as_scalar(t1), as_scalar(t2), as_scalar(T1), as_scalar(T2))

    @property
    def equal_lengths(self) -> bool:
        return self.T1 == self.T2

    def t_value(self, lam: Point) -> ExactScalar:
        return lam[0] * (2 * self.t1 + self.T1) - lam[1] * (2 * self.t2 + self.T2)

    def measure(self) -> Measure:
        half = ExactScalar(1) / 2
        horizontal = SegmentPiece(Point.of(self.t1, 0), Point.of(self.t1 + self.T1, 0), self.T1 * half)
        vertical = SegmentPiece(Point.of(0, self.t2), Point.of(0, self.t2 + self.T2), self.T2 * half)
        return Measure((), (horizontal, vertical), 2)

    def label(self) -> str:
        return f"cross({self.t1},{self.t2},{self.T1},{self.T2})"

    def to_json(self) -> dict:
        data = {"t1": self.t1.to_json(), "t2": self.t2.to_json(), "T1": self.T1.to_json(), "T2": self.T2.to_json()}
        if self.provenance is not None:
            data["provenance"] = self.provenance.to_json()
        return data

    @classmethod
    def from_json(cls, data: dict) -> CrossConfig:
        try:
            return cls.of(*(ExactScalar.parse(data[k]) for k in ("t1", "t2", "T1", "T2")))
        except KeyError as e:
            raise InputError(f"cross config is missing {e.args[0]!r}") from e


class ZeroMembership(NamedTuple):
    member: bool
    branch: str          # "Z1", "Z2" or "none"
    certificate: str     # "exact" or "numeric"
    value: float         # |rho-hat(lambda)|
    reason: str


def _sinc_term(T: float, x: float) -> float:
    """sin(pi T x)/(pi x), continuous at x = 0."""
    return T * float(np.sinc(T * x))


def cross_fourier_value(c: CrossConfig, lam: Point) -> float:
    l1, l2 = lam[0].to_float(), lam[1].to_float()
    T1, T2 = c.T1.to_float(), c.T2.to_float()
    phase1 = np.pi * l1 * (2 * c.t1.to_float() + T1)
    phase2 = np.pi * l2 * (2 * c.t2.to_float() + T2)
    total = np.exp(-1j * phase1) * _sinc_term(T1, l1) + np.exp(-1j * phase2) * _sinc_term(T2, l2)
    return float(abs(0.5 * total))


def _sinc_term_vanishes(T: ExactScalar, x: ExactScalar) -> bool:
    # sin(pi T x)/(pi x) = 0 exactly when T x is a nonzero integer
    tx = T * x
    return bool(tx) and tx.is_integer()


def cross_zero_membership(c: CrossConfig, lam: Any, tol: float = DEFAULT_TOL) -> ZeroMembership:
    lam = lam if isinstance(lam, Point) else Point(tuple(lam))
    if lam.dim != 2:
        raise ValueError("cross frequencies are planar")
    if lam.is_zero():
        raise ValueError("lambda = 0 is never a zero of the Fourier transform of a positive measure")
    l1, l2 = lam
    value = cross_fourier_value(c, lam)

    v1, v2 = _sinc_term_vanishes(c.T1, l1), _sinc_term_vanishes(c.T2, l2)
    if v1 and v2:
        return ZeroMembership(True, "Z1", "exact", value, "T1*l1 and T2*l2 are nonzero integers")
    if v1 or v2:
        return ZeroMembership(False, "none", "exact", value, "exactly one sinc term vanishes")

    T = c.t_value(lam)
    if not T.is_integer():
        return ZeroMembership(False, "none", "exact", value, f"T(lambda) = {T} is not an integer")
    t = T.rat.numerator

    if abs(l1) == abs(l2):
        if c.equal_lengths:
            member = t % 2 != 0
            return ZeroMembership(
                member, "Z2" if member else "none", "exact", value,
                f"equal sinc terms, T(lambda) = {t} {'odd' if member else 'even'}",
            )
        j = 2 * abs(l1)
        if j.is_integer():
            member = (t - j.rat.numerator) % 2 == 0
            return ZeroMembership(
                member, "Z2" if member else "none", "exact", value,
                f"opposite sinc terms, T(lambda) = {t}, 2|l| = {j}",
            )

    member = value <= tol
    return ZeroMembership(
        member, "Z2" if member else "none", "numeric", value,
        f"T(lambda) = {t}, |value| {'<=' if member else '>'} {tol:g}",
    )


def numeric_zero_test(m: Measure, xi: Any, tol: float = DEFAULT_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return abs(fourier_eval(m, xi)) <= tol
