"""Walk through status resolution and mana pricing.

Raw model values live in [0, n-1]; gameplay values come from interpolating
a configured anchor sequence, and the mana price is a weighted sum of
normalized statuses plus per-cell effect weights.
"""

from spellforge import EffectsMatrix, StatusVector, default_config
from spellforge.paramize import compute_cost, resolve_color, resolve_status

config = default_config()
power_range = config.ranges["power"]

print("power anchors:", power_range.values)
for raw in (0.0, 0.5, 1.0, 2.5, 4.0):
    print(f"  raw {raw:>3} -> power {resolve_status(raw, power_range):6.2f}")

# colors interpolate per RGB channel across the palette
palette = config.ranges["color"]
print("\npalette:", palette.values)
for raw in (0.0, 1.5, 3.8):
    print(f"  raw {raw:>3} -> rgb {resolve_color(raw, palette)}")

# price a trap that slows enemies: base cost + status weights + cell weight
statuses = StatusVector(power=2.0, speed=0.0, area=2.0, color=0.8)
slow_trap = EffectsMatrix.from_rows([[0, -1, 0, 0]] + [[0] * 4] * 3)
print("\ntrap with enemy speed debuff:", compute_cost(3, statuses, slow_trap, config.cost))

# a self-harming cell (row 1 = any player, -1) carries a negative weight,
# discounting the spell
risky = EffectsMatrix.from_rows([[0, -1, 0, 0], [-1, 0, 0, 0]] + [[0] * 4] * 2)
print("same trap that also wounds any player:", compute_cost(3, statuses, risky, config.cost))
