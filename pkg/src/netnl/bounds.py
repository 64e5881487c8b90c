"""Closed-form local, quantum and hybrid values and the FNN verdict."""
from __future__ import annotations

import math
from dataclasses import dataclass

FNN_SLACK = 1e-12

CSV_COLUMNS = ("family", "n", "m", "p", "local", "quantum", "lnl", "plnl", "ratio", "fnn", "threshold")


@dataclass(frozen=True)
class BoundsReport:
    family: str
    n: int
    m: int
    p: int
    local_bound: float
    quantum_opt: float
    lnl_value: float
    plnl_value: float
    ratio: float
    fnn: bool
    # largest n with FNN; None when FNN holds for every n, 0 when never
    fnn_threshold_n: int | None

    def to_json(self) -> dict:
        """Keys follow the CSV column names."""
        return {
            "family": self.family,
            "n": self.n,
            "m": self.m,
            "p": self.p,
            "local": self.local_bound,
            "quantum": self.quantum_opt,
            "lnl": self.lnl_value,
            "plnl": self.plnl_value,
            "ratio": self.ratio,
            "fnn": self.fnn,
            "threshold": "unbounded" if self.fnn_threshold_n is None else self.fnn_threshold_n,
        }

    def csv_row(self) -> list[str]:
        threshold = "unbounded" if self.fnn_threshold_n is None else str(self.fnn_threshold_n)
        return [
            self.family,
            str(self.n),
            str(self.m),
            str(self.p),
            fmt(self.local_bound),
            fmt(self.quantum_opt),
            fmt(self.lnl_value),
            fmt(self.plnl_value),
            fmt(self.ratio),
            "true" if self.fnn else "false",
            threshold,
        ]


def fmt(x: float) -> str:
    """Locale-independent 12-significant-digit rendering."""
    return format(float(x), ".12g")


def _check(n: int, m: int) -> None:
    if n < 2 or m < 2:
        raise ValueError(f"need n >= 2 and m >= 2, got n={n}, m={m}")


def alpha(m: int) -> int:
    """Local bound of the bit-string families: sum_q C(m, q) (m - 2q)."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    return sum(math.comb(m, q) * (m - 2 * q) for q in range(m // 2 + 1))


def chained_f(m: int) -> float:
    """f(m) = m (1 - cos(pi / 2m))."""
    return m * (1.0 - math.cos(math.pi / (2 * m)))


def star_c_threshold(m: int) -> int:
    """floor(1 / f(m)): the largest n for which the chained star family shows FNN."""
    return math.floor(1.0 / chained_f(m))


def is_fnn(quantum: float, lnl: float) -> bool:
    return quantum > lnl + FNN_SLACK


def plnl_delta(n: int, m: int, p: int) -> float:
    """Hybrid value with p local sources: (m 2^(m-1))^(1-p/n) alpha_m^(p/n)."""
    return (m * 2 ** (m - 1)) ** (1.0 - p / n) * alpha(m) ** (p / n)


def delta_quantum(m: int) -> float:
    return 2 ** (m - 1) * math.sqrt(m)


def ratio_delta(n: int, m: int) -> float:
    """R_{n,m}: one-local-source hybrid value over the quantum optimum."""
    return plnl_delta(n, m, 1) / delta_quantum(m)


def star_delta_bounds(n: int, m: int, p: int = 1) -> BoundsReport:
    _check(n, m)
    if not 1 <= p <= n:
        raise ValueError(f"p must lie in [1, n={n}], got {p}")
    quantum = delta_quantum(m)
    lnl = plnl_delta(n, m, 1)
    fnn = is_fnn(quantum, lnl)
    return BoundsReport("star_delta", n, m, p, float(alpha(m)), quantum, lnl, plnl_delta(n, m, p),
                        lnl / quantum, fnn, _delta_threshold(m))


def _delta_threshold(m: int) -> int:
    # R_{n,m} is nondecreasing in n, so FNN at any n >= 2 requires it at n = 2
    return 2 if is_fnn(delta_quantum(m), plnl_delta(2, m, 1)) else 0


def star_c_bounds(n: int, m: int) -> BoundsReport:
    _check(n, m)
    quantum = 2 * m * n * math.cos(math.pi / (2 * m))
    lnl = float(2 * m * n - 2)
    return BoundsReport("star_c", n, m, 1, float(2 * m * n - 2 * n), quantum, lnl, lnl, lnl / quantum,
                        is_fnn(quantum, lnl), star_c_threshold(m))


def chain_I_bounds(n: int, m: int) -> BoundsReport:
    _check(n, m)
    quantum = delta_quantum(m)
    lnl = math.sqrt(m * 2 ** (m - 1) * alpha(m))
    fnn = is_fnn(quantum, lnl)
    return BoundsReport("chain_I", n, m, 1, float(alpha(m)), quantum, lnl, lnl, lnl / quantum, fnn,
                        None if fnn else 0)


def chain_T_bounds(n: int, m: int) -> BoundsReport:
    _check(n, m)
    quantum = 4 * m * math.cos(math.pi / (2 * m))
    lnl = float(4 * m - 2)
    fnn = is_fnn(quantum, lnl)
    return BoundsReport("chain_T", n, m, 1, float(4 * m - 4), quantum, lnl, lnl, lnl / quantum, fnn,
                        None if fnn else 0)


def bounds(family: str, n: int, m: int, p: int = 1) -> BoundsReport:
    if family == "star_delta":
        return star_delta_bounds(n, m, p)
    if p != 1:
        raise ValueError(f"p != 1 is only defined for star_delta, got p={p}")
    if family == "star_c":
        return star_c_bounds(n, m)
    if family == "chain_I":
        return chain_I_bounds(n, m)
    if family == "chain_T":
        return chain_T_bounds(n, m)
    raise ValueError(f"unknown family {family!r}")


def plnl_threshold(n: int, m: int) -> int | None:
    """Smallest number of local sources p for which the hybrid value drops
    strictly below the quantum optimum of the star_delta family."""
    _check(n, m)
    quantum = delta_quantum(m)
    for p in range(1, n + 1):
        if plnl_delta(n, m, p) < quantum - FNN_SLACK:
            return p
    return None
