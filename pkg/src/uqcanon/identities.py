"""Operator identities checked as exact matrix identities on built weight spaces.

* commutation of the derivation with divided powers:
  ``_i r E_i^(n) = v^{2n} E_i^(n) _i r + v^{n-1} E_i^(n-1)``;
* the projectors ``P_t = sum_s (-1)^s v^{s(s-1)/2} E_i^(s) (_i r)^{s+t}``
  are killed by ``_i r``;
* ``sum_t v^{-t(t-1)/2} E_i^(t) P_t = Id``.

Each identity is checked for left multiplication with ``_i r`` and for the
mirror pair (right multiplication with ``r_i``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cartan, linalg
from .coeff import RationalCoeff, vpow


@dataclass
class IdentityReport:
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def bump(self, name):
        self.counts[name] = self.counts.get(name, 0) + 1

    def to_json(self):
        return {"passed": self.passed, "instances": dict(sorted(self.counts.items())), "failures": self.failures[:50]}


def _scaled(c, m):
    return linalg.matscale(RationalCoeff.of(c), m)


def _zero(rows, cols):
    return linalg.zeros(rows, cols)


def mult_matrix(engine, side, i, n, source):
    """Matrix of ``E_i^(n)`` multiplication from ``source`` to ``source + n e_i``."""
    target = cartan.shifted(source, i, n)
    return engine.left_op(side, i, n, target)


def der_power(engine, side, i, k, source):
    """Matrix of the ``k``-th power of the derivation from ``source``; ``None`` if it leaves N^I."""
    if source[i] < k:
        return None
    m = linalg.identity(engine.dim(source))
    cur = source
    for _ in range(k):
        m = linalg.matmul(engine.der_op(side, i, cur), m)
        cur = cartan.shifted(cur, i, -1)
    return m


def projector(engine, side, i, t, nu):
    """``P_t`` on the weight space at ``nu``, landing at ``nu - t e_i``."""
    target = cartan.shifted(nu, i, -t)
    acc = _zero(engine.dim(target), engine.dim(nu))
    for s in range(nu[i] - t + 1):
        d = der_power(engine, side, i, s + t, nu)
        if d is None:
            continue
        base = cartan.shifted(nu, i, -(s + t))
        term = linalg.matmul(mult_matrix(engine, side, i, s, base), d)
        acc = linalg.matadd(acc, _scaled(vpow(s * (s - 1) // 2) * (-1) ** s, term))
    return acc


def check_operator_identities(engine):
    rep = IdentityReport()
    datum = engine.datum
    for nu in cartan.enumerate_weights(datum, engine.max_height):
        for i in datum.vertices:
            for side in ("left", "right"):
                _check_commutation(engine, rep, side, i, nu)
                if nu[i] == 0:
                    continue
                _check_projectors(engine, rep, side, i, nu)
    return rep


def _check_commutation(engine, rep, side, i, mu):
    # source mu, every n with mu + n e_i in range
    n = 1
    while engine.in_range(cartan.shifted(mu, i, n)):
        top = cartan.shifted(mu, i, n)
        lhs = linalg.matmul(engine.der_op(side, i, top), mult_matrix(engine, side, i, n, mu))
        land = cartan.shifted(mu, i, n - 1)
        rhs = _scaled(vpow(n - 1), mult_matrix(engine, side, i, n - 1, mu))
        if mu[i] > 0:
            below = cartan.shifted(mu, i, -1)
            term = linalg.matmul(mult_matrix(engine, side, i, n, below), engine.der_op(side, i, mu))
            rhs = linalg.matadd(rhs, _scaled(vpow(2 * n), term))
        rep.bump(f"derivation-commutation/{side}")
        if _to_list(lhs) != _to_list(rhs):
            rep.failures.append({"identity": "derivation-commutation", "side": side, "i": i + 1, "n": n, "source": list(mu), "landing": list(land)})
        n += 1


def _check_projectors(engine, rep, side, i, nu):
    total = _zero(engine.dim(nu), engine.dim(nu))
    for t in range(nu[i] + 1):
        p = projector(engine, side, i, t, nu)
        target = cartan.shifted(nu, i, -t)
        if target[i] > 0:
            killed = linalg.matmul(engine.der_op(side, i, target), p)
            rep.bump(f"projector-kernel/{side}")
            if not linalg.is_zero_matrix(killed):
                rep.failures.append({"identity": "projector-kernel", "side": side, "i": i + 1, "t": t, "weight": list(nu)})
        else:
            rep.bump(f"projector-kernel/{side}")  # lands where the derivation is zero
        lift = linalg.matmul(mult_matrix(engine, side, i, t, target), p)
        total = linalg.matadd(total, _scaled(vpow(-(t * (t - 1) // 2)), lift))
    rep.bump(f"completeness/{side}")
    if _to_list(total) != _to_list(linalg.identity(engine.dim(nu))):
        rep.failures.append({"identity": "completeness", "side": side, "i": i + 1, "weight": list(nu)})


def _to_list(m):
    return [list(r) for r in m]
