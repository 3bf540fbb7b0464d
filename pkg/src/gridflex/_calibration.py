"""Frozen constants of the bundled benchmark dataset.

Generated by tools/calibrate_benchmark.py; edit the tool, not this
file. Quantile curves are tuples of piecewise-linear segments over
the rank axis; a gap between consecutive segments is a jump of the
distribution."""

INTENSITY_CURVES = {2023: (((0.0, 50.0), (0.13, 100.0), (0.25, 180.0)),
        ((0.25, 430.0),
         (0.594, 441.497732907572),
         (0.635, 470.607513310984),
         (0.648, 477.29014),
         (1.0, 756.4286516590571))),
 2024: (((0.0, 44.0), (0.13, 95.0), (0.25, 167.75)),
        ((0.25, 424.3207011788163),
         (0.594, 435.08169440939776),
         (0.635, 458.8),
         (0.723, 480.2652412156482),
         (0.745, 517.9369939721294),
         (0.882, 606.0830492761515),
         (0.916, 642.3556031811828),
         (0.953, 682.2159753479035),
         (0.975, 703.2603482191556),
         (0.983, 711.6721999835414),
         (1.0, 827.9999999999935))),
 2025: (((0.0, 46.0), (0.13, 92.0), (0.25, 168.0)),
        ((0.25, 424.0),
         (0.594, 438.88524385698554),
         (0.635, 461.10444974175607),
         (0.648, 464.23996),
         (1.0, 717.2409511397788)))}

PRICE_CURVES = {2024: (((0.0, -90.0), (0.05, 0.0)),
        ((0.05, 1.2789158278322694),
         (0.5, 35.17018526538741),
         (0.9, 89.52410794825886),
         (0.982, 152.21082551808746),
         (0.9895, 156.96652421683362),
         (0.9967, 276.42498334298404),
         (0.9976, 286.4615279280278),
         (0.9988, 383.1157502912954),
         (0.9994, 397.73065285991714),
         (1.0, 900.0000000000346)))}

GENERIC_INTENSITY_SHAPE = (((0.0, -1.0),
  (0.1, -0.72),
  (0.3, -0.38),
  (0.5, -0.05),
  (0.7, 0.28),
  (0.9, 0.62),
  (0.98, 0.87),
  (1.0, 1.05)),)

GENERIC_PRICE_SHAPE = (((0.0, -2.2),
  (0.05, -1.1),
  (0.3, -0.45),
  (0.5, 0.0),
  (0.8, 0.55),
  (0.95, 1.3),
  (0.99, 2.6),
  (1.0, 6.0)),)

MEAN_INTENSITY = {2002: 690.686042614176,
 2003: 667.5877551177061,
 2004: 683.4699362107234,
 2005: 657.7313451146331,
 2006: 604.7115208785191,
 2007: 691.9835124838294,
 2008: 623.8437881758231,
 2009: 683.3346013243586,
 2010: 612.3240918055766,
 2011: 634.1998091827136,
 2012: 645.8023151220642,
 2013: 616.6403156548273,
 2014: 585.7846409997208,
 2015: 569.0521481904885,
 2016: 546.5838533080113,
 2017: 570.4071310080412,
 2018: 534.6056048519777,
 2019: 501.83403210350536,
 2020: 486.4111784958352,
 2021: 514.4406301583006,
 2022: 444.7266106072324,
 2023: 418.4416096860982,
 2024: 399.9514696860982,
 2025: 405.3914296860982}

INTENSITY_SPREAD = {2002: 290.088,
 2003: 280.387,
 2004: 287.057,
 2005: 276.247,
 2006: 253.979,
 2007: 290.633,
 2008: 262.014,
 2009: 287.001,
 2010: 257.176,
 2011: 266.364,
 2012: 271.237,
 2013: 258.989,
 2014: 246.03,
 2015: 239.002,
 2016: 229.565,
 2017: 239.571,
 2018: 224.534,
 2019: 210.77,
 2020: 204.293,
 2021: 216.065,
 2022: 186.785}

PRICE_LEVEL = {2002: (27.0, 8.0),
 2003: (29.0, 9.0),
 2004: (30.0, 9.0),
 2005: (40.0, 13.0),
 2006: (47.0, 16.0),
 2007: (38.0, 14.0),
 2008: (63.0, 20.0),
 2009: (39.0, 14.0),
 2010: (44.0, 13.0),
 2011: (51.0, 13.0),
 2012: (43.0, 14.0),
 2013: (38.0, 14.0),
 2014: (33.0, 12.0),
 2015: (32.0, 12.0),
 2016: (29.0, 12.0),
 2017: (34.0, 15.0),
 2018: (44.0, 16.0),
 2019: (38.0, 15.0),
 2020: (30.0, 17.0),
 2021: (97.0, 55.0),
 2022: (170.0, 90.0),
 2023: (95.0, 48.0),
 2025: (78.0, 42.0)}

RENEWABLE_SHARE_PERCENT = {2002: 8.8,
 2003: 9.9,
 2004: 11.2,
 2005: 12.4,
 2006: 13.8,
 2007: 15.6,
 2008: 16.9,
 2009: 18.2,
 2010: 19.1,
 2011: 21.9,
 2012: 24.6,
 2013: 26.2,
 2014: 28.3,
 2015: 31.5,
 2016: 33.1,
 2017: 36.2,
 2018: 38.9,
 2019: 42.0,
 2020: 45.3,
 2021: 42.7,
 2022: 48.4,
 2023: 59.2759,
 2024: 62.7,
 2025: 61.692600000000006}

TOTAL_GENERATION_GW = {2002: 46.69,
 2003: 47.01,
 2004: 48.53,
 2005: 50.61,
 2006: 49.22,
 2007: 49.65,
 2008: 50.44,
 2009: 51.08,
 2010: 51.93,
 2011: 51.54,
 2012: 53.58,
 2013: 51.75,
 2014: 54.51,
 2015: 53.34,
 2016: 53.75,
 2017: 55.99,
 2018: 54.76,
 2019: 57.03,
 2020: 57.16,
 2021: 57.02,
 2022: 56.39,
 2023: 56.62,
 2024: 58.73,
 2025: 59.71}

EMISSION_FACTORS = {'biomass': 120.0,
 'gas': 490.0,
 'hard_coal': 1050.0,
 'hydro': 11.0,
 'lignite': 1150.0,
 'pumped_storage': 300.0,
 'solar': 35.0,
 'wind_offshore': 13.0,
 'wind_onshore': 12.0}

SHAPE_TAU_H = 260.0

SHAPE_DIURNAL = 0.25

SHAPE_WEEKLY = 0.1

SHAPE_NOISE = 0.03

PRICE_COUPLING = 0.6

PRICE_DIURNAL = 0.25

INTENSITY_SEED = {2002: 7026,
 2003: 7039,
 2004: 7052,
 2005: 7065,
 2006: 7078,
 2007: 7091,
 2008: 7104,
 2009: 7117,
 2010: 7130,
 2011: 7143,
 2012: 7156,
 2013: 7169,
 2014: 7182,
 2015: 7195,
 2016: 7208,
 2017: 7221,
 2018: 7234,
 2019: 7247,
 2020: 7260,
 2021: 7273,
 2022: 7286,
 2023: 7299,
 2024: 2,
 2025: 7325}
