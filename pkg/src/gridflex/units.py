"""Unit conversion constants shared across the package.

Power values are stored in W per logical core everywhere and converted to MW
(or kW for the demand charge) exactly once, at objective evaluation. Keeping
the factors in one table avoids the classic W/kW/MW mixup when the same
symbol appears in different units in different data sources.
"""

from __future__ import annotations

W_PER_KW = 1_000.0
W_PER_MW = 1_000_000.0

MW_PER_W = 1.0 / W_PER_MW
KW_PER_W = 1.0 / W_PER_KW

#: Hours used to convert yearly rates (demand charge, embedded amortisation).
#: Fixed independently of leap years so rate conversions stay self-consistent.
HOURS_PER_YEAR = 8760.0
