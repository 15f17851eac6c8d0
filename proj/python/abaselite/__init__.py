"""Multi-tenant KV serving mechanics: RU accounting, admission control,
fair scheduling, caching, forecasting, and a deterministic scenario simulator.

The heavy lifting lives in the compiled ``_core`` extension; this package
adds thin conveniences that hand back parsed dictionaries instead of JSON
text.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from abaselite._core import (  # noqa: F401
    forecast as _forecast_json,
    plan_reschedule as _plan_reschedule_json,
    ru_write,
    run_scenario as _run_scenario_raw,
    settle_read,
    validate_scenario,
)

__all__ = [
    "ru_write",
    "settle_read",
    "validate_scenario",
    "run_scenario",
    "forecast",
    "plan_reschedule",
]


def run_scenario(config: dict | str, seed: Optional[int] = None) -> dict[str, Any]:
    """Run a scenario and return summary/decisions as dicts plus the QPS CSV."""
    text = config if isinstance(config, str) else json.dumps(config)
    raw = _run_scenario_raw(text, seed)
    return {
        "summary": json.loads(raw["summary"]),
        "qps_csv": raw["qps_csv"],
        "decisions": [json.loads(line) for line in raw["decisions"]],
    }


def forecast(hourly_values: list[float], horizon: int = 168) -> dict[str, Any]:
    """Forecast an hourly usage series `horizon` hours ahead."""
    return json.loads(_forecast_json(list(hourly_values), horizon))


def plan_reschedule(
    pool: dict | str, iterations: int = 32, balance_counts: bool = False
) -> list[dict[str, Any]]:
    """Plan replica migrations for a pool snapshot; returns per-pool reports."""
    text = pool if isinstance(pool, str) else json.dumps(pool)
    return json.loads(_plan_reschedule_json(text, iterations, balance_counts))
