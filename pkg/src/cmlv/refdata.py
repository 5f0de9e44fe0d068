"""Reference values used by the self-test and the acceptance suite.

Table digits are c_p+ p^-2 mod p for the curves D = 17 and D = -14 and
primes p = 1 mod 4 (p = 17 is absent for D = 17: it divides the conductor).
"""

B13_COMMON_FACTOR = 7496723869173 * 2 ** 24

# B_13 / B13_COMMON_FACTOR, odd coefficients from degree 1 up to degree 13
B13_REDUCED = {
    17: (1383348216959, -10236515835780, 12057373443375, -4592819790000,
         723915196875, -49451512500, 1212046875),
    -14: (431525237696, 3877463640960, 5545863414000, 2565173520000,
          490959787500, 40724775000, 1212046875),
}

# (p, k, unit u) with c_p+ = u p^3 mod p^(k) for D = -14
EXCEPTIONAL_DM14 = ((29, 4, 27), (277, 4, 155))

DIGITS_D17 = {
    5: 3, 13: 8, 29: 22, 37: 20, 41: 29, 53: 45, 61: 26, 73: 26, 89: 21, 97: 83, 101: 59,
    109: 34, 113: 36, 137: 107, 149: 60, 157: 145, 173: 44, 181: 70, 193: 115, 197: 145,
    229: 178, 233: 34, 241: 141, 257: 199, 269: 188, 277: 235, 281: 129, 293: 250, 313: 69,
    317: 237, 337: 19, 349: 113, 353: 143, 373: 75, 389: 257, 397: 78, 401: 349, 409: 11,
    421: 152, 433: 432, 449: 423, 457: 288, 461: 133, 509: 103, 521: 106, 541: 33, 557: 276,
    569: 423, 577: 39, 593: 523, 601: 373, 613: 429, 617: 133, 641: 285, 653: 96, 661: 20,
    673: 630, 677: 332, 701: 105, 709: 437, 733: 260, 757: 357, 761: 363, 769: 751, 773: 13,
    797: 123, 809: 443, 821: 6, 829: 645, 853: 48, 857: 5, 877: 132, 881: 82, 929: 845,
    937: 341, 941: 253, 953: 794, 977: 548, 997: 302,
}

DIGITS_DM14 = {
    5: 4, 13: 4, 17: 7, 29: 0, 37: 9, 41: 12, 53: 42, 61: 60, 73: 56, 89: 65, 97: 90, 101: 53,
    109: 68, 113: 47, 137: 126, 149: 111, 157: 48, 173: 149, 181: 157, 193: 11, 197: 54,
    229: 109, 233: 174, 241: 7, 257: 9, 269: 139, 277: 0, 281: 107, 293: 133, 313: 245,
    317: 191, 337: 151, 349: 263, 353: 15, 373: 236, 389: 300, 397: 68, 401: 340, 409: 313,
    421: 244, 433: 152, 449: 140, 457: 376, 461: 37, 509: 407, 521: 423, 541: 422, 557: 84,
    569: 209, 577: 212, 593: 18, 601: 508, 613: 590, 617: 536, 641: 489, 653: 540, 661: 330,
    673: 197, 677: 185, 701: 95, 709: 108, 733: 462, 757: 672, 761: 596, 769: 343, 773: 369,
    797: 93, 809: 212, 821: 347, 829: 823, 853: 635, 857: 502, 877: 603, 881: 591, 929: 766,
    937: 100, 941: 642, 953: 866, 977: 98, 997: 401,
}

DIGITS_HIGH_D17 = {
    11057: 3236, 11069: 7768, 11093: 9234, 11113: 832, 11117: 6204, 11149: 8885, 11161: 1292,
    11173: 587, 11177: 6184, 11197: 8804, 11213: 6409, 11257: 192, 11261: 700, 11273: 5932,
    11317: 1969, 11321: 5451, 11329: 5635, 11353: 3322, 11369: 6790, 11393: 4532, 11437: 10570,
    11489: 8715, 11497: 4837, 11549: 7265, 11593: 225, 11597: 8864, 11617: 10691, 11621: 7500,
    11633: 293, 11657: 10665, 11677: 10365, 11681: 6023, 11689: 11553, 11701: 5851,
    11717: 10185, 11777: 10882, 11789: 6221, 11801: 10632, 11813: 2123, 11821: 7340,
    11833: 1715, 11897: 8766, 11909: 6032, 11933: 1190, 11941: 5023, 11953: 10988,
    11969: 11669, 11981: 1742,
}

DIGITS_HIGH_DM14 = {
    11057: 10336, 11069: 6637, 11093: 5437, 11113: 9242, 11117: 7965, 11149: 1364, 11161: 1636,
    11173: 10503, 11177: 4427, 11197: 6750, 11213: 8508, 11257: 1839, 11261: 6850, 11273: 510,
    11317: 2892, 11321: 10402, 11329: 9145, 11353: 7820, 11369: 11276, 11393: 358, 11437: 3120,
    11489: 10941, 11497: 6424, 11549: 2757, 11593: 369, 11597: 7113, 11617: 1052, 11621: 6521,
    11633: 5463, 11657: 4770, 11677: 11566, 11681: 5351, 11689: 3152, 11701: 11618,
    11717: 8521, 11777: 3487, 11789: 3509, 11801: 3148, 11813: 3767, 11821: 128, 11833: 9412,
    11897: 10281, 11909: 11519, 11933: 1783, 11941: 6379, 11953: 1162, 11969: 11573,
    11981: 8384,
}
