"""Reported statistics from the original Kigali low-cost sensor deployment.

These values summarize the (unpublished) multi-year REMA dataset this toolkit
was designed around. They are documentation constants for plot annotation and
sanity context — synthetic or user-supplied data will not reproduce them, and
no test treats them as oracles.

All concentrations in µg/m³.
"""

from __future__ import annotations

from .trends import Season

#: Country-level daily-average PM2.5 reported for the deployment period.
REPORTED_NATIONAL_DAILY_MEAN = 42.6

#: Seasonal all-station mean PM2.5 over the deployment period.
REPORTED_SEASONAL_MEANS = {
    Season.LONG_DRY: 45.844,
    Season.SHORT_RAINY: 37.358,
    Season.SHORT_DRY: 44.155,
    Season.LONG_RAINY: 35.063,
}

#: Highest hourly mean PM2.5 recorded per station (top four stations).
REPORTED_HOURLY_MAXIMA = {
    "Gikomero": 214.516,
    "Gacuriro": 218.756,
    "Rusororo": 196.958,
    "Rebero": 189.716,
}

#: Highest median hourly PM2.5 recorded per station (top four stations).
REPORTED_MEDIAN_HOURLY = {
    "Rusororo": 46.831,
    "Kimihurura": 44.952,
    "Kiyovu": 44.695,
    "Gikondo Mburabuturo": 43.228,
}

#: Deployment-period rolling-forecast errors per station and model,
#: keyed station -> model -> (rmse, mae). Shape reference for the comparison
#: table; not reproducible without the original dataset.
REPORTED_MODEL_COMPARISON = {
    "Gacuriro": {"arima": (8.942, 7.489), "ann": (10.183, 7.700), "gp": (17.184, 16.886)},
    "Gikomero": {"arima": (8.942, 6.800), "ann": (8.926, 6.681), "gp": (24.215, 21.200)},
    "Gikondo Mburabuturo": {
        "arima": (10.512, 7.967),
        "ann": (10.842, 8.092),
        "gp": (16.694, 16.886),
    },
    "Gitega": {"arima": (2.537, 1.241), "ann": (2.746, 1.694), "gp": (20.162, 11.960)},
    "Kimihurura": {"arima": (10.621, 8.532), "ann": (11.071, 8.542), "gp": (18.353, 14.979)},
    "Kiyovu": {"arima": (11.875, 9.312), "ann": (12.403, 9.192), "gp": (20.162, 17.195)},
    "Mount Kigali": {"arima": (8.701, 6.905), "ann": (9.361, 6.942), "gp": (24.437, 21.636)},
    "Rebero": {"arima": (8.606, 6.915), "ann": (8.888, 6.774), "gp": (22.286, 18.158)},
    "Rusororo": {"arima": (13.464, 9.840), "ann": (13.747, 10.149), "gp": (22.409, 17.474)},
}
