# Regenerates trend_series.csv: 20 noisy linear series over 1997-2017 whose
# slopes run from flat to clearly trending.
import numpy as np

rng = np.random.default_rng(20240611)
years = np.arange(1997, 2018)
with open("trend_series.csv", "w") as out:
    out.write("series,year,value\n")
    for k in range(20):
        slope = (-1) ** k * 0.0005 * k
        values = 1.0 + slope * (years - 1997) + rng.normal(0.0, 0.1, years.size)
        for y, v in zip(years, values):
            out.write(f"{k},{y},{float(v)!r}\n")
