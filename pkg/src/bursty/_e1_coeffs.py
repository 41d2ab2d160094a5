"""Coefficient tables for the six-region E1 approximation.

Generated by tools/gen_e1_coeffs.py; do not edit by hand.
See that script for the constructions and accuracy checks.
"""

PADE6_EXTERIOR_NUM = (
    1.0,
    41.0,
    590.0,
    3648.0,
    9432.0,
    8028.0,
    720.0,
)

PADE6_EXTERIOR_DEN = (
    1.0,
    42.0,
    630.0,
    4200.0,
    12600.0,
    15120.0,
    5040.0,
)

PADE10_EXTERIOR_NUM = (
    1.0,
    109.0,
    4842.0,
    114064.0,
    1553664.0,
    12518100.0,
    58603440.0,
    150023520.0,
    184386240.0,
    80627040.0,
    3628800.0,
)

PADE10_EXTERIOR_DEN = (
    1.0,
    110.0,
    4950.0,
    118800.0,
    1663200.0,
    13970880.0,
    69854400.0,
    199584000.0,
    299376000.0,
    199584000.0,
    39916800.0,
)

PADE10_ELLIPSE_NUM = (
    0.0,
    1.0,
    0.2685463379663074,
    0.051983945083971125,
    0.005866901928927395,
    0.0004914758217559062,
    2.9743267268990017e-05,
    1.2727662282273993e-06,
    4.098806752755106e-08,
    7.63476033908259e-10,
    9.293089066455605e-12,
)

PADE10_ELLIPSE_DEN = (
    1.0,
    0.5185463379663074,
    0.12606497401999242,
    0.018991682213575087,
    0.001970644394521357,
    0.00014772530716882567,
    8.134785232535328e-06,
    3.263448624654997e-07,
    9.171731551594626e-09,
    1.639380038318842e-10,
    1.423814728169985e-12,
)

CHEB20_ELLIPSE = (
    -219.51775429386404,
    374.62251395468445,
    -240.06356837243757,
    122.69669152518532,
    -51.79668134335605,
    18.562835736613625,
    -5.768895264364345,
    1.5809175167777683,
    -0.38717955380503827,
    0.08567370766921663,
    -0.017284133692720353,
    0.003203458891229825,
    -0.0005490062664836272,
    8.748738822483558e-05,
    -1.302657578134877e-05,
    1.820031996057411e-06,
    -2.395102270436075e-07,
    2.97863868472479e-08,
    -3.5112415634793494e-09,
    3.933901910321672e-10,
    -4.1991926194022304e-11,
)

CHEB20_ELLIPSE_INTERVAL = (-9.0, 0.0)

CHEB20_RADIAL = (
    1.0906784274143901,
    -0.060261054157473626,
    0.020489281747386307,
    -0.007024068017435558,
    0.0023634063370836273,
    -0.0007531773896432745,
    0.0002175454007683817,
    -5.325100801347595e-05,
    9.29465565039814e-06,
    -8.580583530274644e-08,
    -8.486881200920786e-07,
    4.826060060439654e-07,
    -1.8955482678527655e-07,
    6.126925437151037e-08,
    -1.7153954828323473e-08,
    4.226752377576905e-09,
    -9.16684334809721e-10,
    1.7128253294768327e-10,
    -2.6621520413460545e-11,
    3.0940425337741332e-12,
    -2.3138201698087476e-13,
)

CHEB20_RADIAL_INTERVAL = (8.0, 24.0)
