"""Greedy bit allocation: strip bits from the worst subcarrier until the
bit-weighted mean BER meets the target.

Every subcarrier starts at 64-QAM. Each iteration finds the active
subcarrier with the largest BER (ties broken toward the lowest index) and
steps it down one constellation level; a BPSK subcarrier is nulled and
leaves the average. The loop stops as soon as the weighted mean BER is at
or below the target, or reports TransmissionStopped once every subcarrier
has been nulled.

A max-heap over (BER, index) with lazy invalidation keeps each iteration
O(log N); the weighted numerator/denominator are maintained incrementally.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .link import ACTIVE_LADDER, Constellation, SubcarrierLink, ber


class AllocationStatus(enum.Enum):
    MET = "met"
    TRANSMISSION_STOPPED = "transmission_stopped"


@dataclass(frozen=True)
class AllocationResult:
    loads: list              # Constellation per subcarrier
    per_ber: np.ndarray      # BER per subcarrier; NaN where nulled
    mean_ber: float          # NaN when transmission stopped
    throughput_bits: int
    status: AllocationStatus
    iterations: int


def mean_ber(loads, per_ber) -> float:
    """Bit-weighted average BER over the active subcarriers."""
    num = 0.0
    den = 0
    for load, b in zip(loads, per_ber):
        m = load.bits_per_symbol if isinstance(load, Constellation) else int(load)
        if m > 0:
            num += m * b
            den += m
    if den == 0:
        raise DomainError("no active subcarriers")
    return num / den


def allocate(sinrs, target_ber: float, cp_loss: float,
             trace: list | None = None) -> AllocationResult:
    """Run the greedy reduction on an array of per-subcarrier SINRs.

    ``trace``, when given, collects one tuple per iteration:
    (iteration, victim_index, new_constellation, new_mean_ber).
    """
    g = np.asarray(sinrs, dtype=float)
    if g.ndim != 1 or g.size < 1:
        raise DomainError("sinrs must be a non-empty 1-D array")
    n_sc = g.size
    table = {c: np.atleast_1d(ber(c, g, cp_loss)) for c in ACTIVE_LADDER}

    loads = [Constellation.QAM64] * n_sc
    cur = table[Constellation.QAM64].copy()
    num = float(np.dot(cur, np.full(n_sc, 6.0)))
    den = 6 * n_sc
    heap = [(-b, k) for k, b in enumerate(cur)]
    heapq.heapify(heap)

    iterations = 0
    while True:
        if den > 0 and num <= target_ber * den:
            per = np.where([c is not Constellation.NULL for c in loads], cur, np.nan)
            return AllocationResult(loads=loads, per_ber=per, mean_ber=num / den,
                                    throughput_bits=den, status=AllocationStatus.MET,
                                    iterations=iterations)
        if den == 0:
            return AllocationResult(loads=loads, per_ber=np.full(n_sc, np.nan),
                                    mean_ber=float("nan"), throughput_bits=0,
                                    status=AllocationStatus.TRANSMISSION_STOPPED,
                                    iterations=iterations)
        while True:
            neg_b, k = heapq.heappop(heap)
            if loads[k] is not Constellation.NULL and -neg_b == cur[k]:
                break
        old = loads[k]
        new = old.reduce()
        num -= old.bits_per_symbol * cur[k]
        den -= old.bits_per_symbol
        if new is not Constellation.NULL:
            b_new = float(table[new][k])
            num += new.bits_per_symbol * b_new
            den += new.bits_per_symbol
            cur[k] = b_new
            heapq.heappush(heap, (-b_new, k))
        loads[k] = new
        iterations += 1
        if trace is not None:
            trace.append((iterations, k, new, num / den if den else float("nan")))


def allocate_links(links: list[SubcarrierLink], target_ber: float,
                   cp_loss: float, trace: list | None = None) -> AllocationResult:
    return allocate(np.array([l.sinr for l in links]), target_ber, cp_loss, trace)
