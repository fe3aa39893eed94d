from __future__ import annotations

import os

from hypothesis import HealthCheck, settings

# derandomized so every run explores the same examples
settings.register_profile("repo", derandomize=True, max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))
