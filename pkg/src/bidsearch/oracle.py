"""Counted black-box query access to an instance's landscapes.

Search algorithms never touch landscape arithmetic directly: they go
through a :class:`CountingOracle`, which answers integer bidding queries,
memoizes repeated probes of the same (platform, bid) key, and keeps an
append-only ledger.  Query-complexity results are reported in terms of
*distinct* queries; the total count is kept alongside for diagnostics.

Probing one past the top bid is answered with an infinite sentinel
(no such bid exists) and is free: it is neither counted nor recorded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .landscape import Instance, QueryAnswer, interpolate, marginal_cost

_SENTINEL = QueryAnswer(value=float("inf"), cost=float("inf"), marginal_cost=float("inf"))


@dataclass
class QueryLedger:
    """Append-only record of every counted query."""

    entries: list[tuple[int, int, QueryAnswer]] = field(default_factory=list)
    total_queries: int = 0
    distinct_queries: int = 0

    def record(self, platform: int, bid: int, answer: QueryAnswer, fresh: bool) -> None:
        self.entries.append((platform, bid, answer))
        self.total_queries += 1
        if fresh:
            self.distinct_queries += 1

    def to_jsonl(self) -> str:
        """One JSON record per query, for audit and replay."""
        lines = []
        for platform, bid, ans in self.entries:
            lines.append(
                json.dumps(
                    {
                        "platform": platform,
                        "bid": bid,
                        "value": ans.value,
                        "cost": ans.cost,
                        "mc": ans.marginal_cost,
                    }
                )
            )
        return "\n".join(lines) + ("\n" if lines else "")


class CountingOracle:
    """Bidding-query access to one instance, with memoization and counting.

    Exposes the problem constants the bidder is assumed to know (platform
    count, bid count, budget, target return-on-spend) but hides the
    landscapes behind :meth:`query`.  Confined to a single algorithm run.
    """

    def __init__(self, instance: Instance):
        self.instance = instance
        self.ledger = QueryLedger()
        self._memo: dict[tuple[int, int], QueryAnswer] = {}

    @property
    def num_platforms(self) -> int:
        return self.instance.num_platforms

    @property
    def num_bids(self) -> int:
        return self.instance.num_bids

    @property
    def budget(self) -> float:
        return self.instance.budget

    @property
    def target_ros(self) -> float:
        return self.instance.target_ros

    def query(self, platform: int, bid: int) -> QueryAnswer:
        """Play integer ``bid`` on ``platform``; learn value, cost, marginal cost."""
        m, n = self.num_platforms, self.num_bids
        if not 0 <= platform < m:
            raise ValueError(f"platform index must be in 0..{m - 1} (got {platform})")
        if not float(bid).is_integer() or not 0 <= bid <= n + 1:
            raise ValueError(f"bid must be an integer in 0..{n + 1} (got {bid})")
        bid = int(bid)
        if bid == n + 1:
            return _SENTINEL
        key = (platform, bid)
        cached = self._memo.get(key)
        if cached is not None:
            self.ledger.record(platform, bid, cached, fresh=False)
            return cached
        if bid == 0:
            answer = QueryAnswer(0.0, 0.0, 0.0, mc_defined=False)
        else:
            plat = self.instance.platforms[platform]
            value, cost = interpolate(plat, bid)
            answer = QueryAnswer(value, cost, marginal_cost(plat, bid))
        self._memo[key] = answer
        self.ledger.record(platform, bid, answer, fresh=True)
        return answer

    def snapshot_counts(self) -> tuple[int, int]:
        """Current (total, distinct) query counts; does not mutate."""
        return self.ledger.total_queries, self.ledger.distinct_queries
