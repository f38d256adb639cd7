"""Generated by tools/gen_irreducibles.py. Do not edit."""

# degree -> middle exponents of x^d + ... + 1
MIDDLE_EXPONENTS = {
    17: (3,),
    18: (3,),
    19: (1, 2, 5),
    20: (3,),
    21: (2,),
    22: (1,),
    23: (5,),
    24: (1, 3, 4),
    25: (3,),
    26: (1, 3, 4),
    27: (1, 2, 5),
    28: (1,),
    29: (2,),
    30: (1,),
    31: (3,),
    32: (2, 3, 7),
    33: (10,),
    34: (7,),
    35: (2,),
    36: (9,),
    37: (1, 4, 6),
    38: (1, 5, 6),
    39: (4,),
    40: (3, 4, 5),
    41: (3,),
    42: (7,),
    43: (3, 4, 6),
    44: (5,),
    45: (1, 3, 4),
    46: (1,),
    47: (5,),
    48: (2, 3, 5),
    49: (9,),
    50: (2, 3, 4),
    51: (1, 3, 6),
    52: (3,),
    53: (1, 2, 6),
    54: (9,),
    55: (7,),
    56: (2, 4, 7),
    57: (4,),
    58: (19,),
    59: (2, 4, 7),
    60: (1,),
    61: (1, 2, 5),
    62: (29,),
    63: (1,),
    64: (1, 3, 4),
    65: (18,),
    66: (3,),
    67: (1, 2, 5),
    68: (9,),
    69: (2, 5, 6),
    70: (1, 3, 5),
    71: (6,),
    72: (3, 9, 10),
    73: (25,),
    74: (35,),
    75: (1, 3, 6),
    76: (21,),
    77: (2, 5, 6),
    78: (3, 5, 6),
    79: (9,),
    80: (2, 4, 9),
    81: (4,),
    82: (1, 3, 8),
    83: (2, 4, 7),
    84: (5,),
    85: (1, 2, 8),
    86: (21,),
    87: (13,),
    88: (2, 6, 7),
    89: (38,),
    90: (27,),
    91: (1, 5, 8),
    92: (21,),
    93: (2,),
    94: (21,),
    95: (11,),
    96: (6, 9, 10),
    97: (6,),
    98: (11,),
    99: (1, 3, 6),
    100: (15,),
    101: (1, 6, 7),
    102: (29,),
    103: (9,),
    104: (1, 3, 4),
    105: (4,),
    106: (15,),
    107: (4, 7, 9),
    108: (17,),
    109: (2, 4, 5),
    110: (33,),
    111: (10,),
    112: (3, 4, 5),
    113: (9,),
    114: (2, 3, 5),
    115: (5, 7, 8),
    116: (1, 2, 4),
    117: (1, 2, 5),
    118: (33,),
    119: (8,),
    120: (1, 3, 4),
    121: (18,),
    122: (1, 2, 6),
    123: (2,),
    124: (19,),
    125: (5, 6, 7),
    126: (21,),
    127: (1,),
    128: (1, 2, 7),
    129: (5,),
    130: (3,),
    131: (2, 3, 8),
    132: (17,),
    133: (2, 8, 9),
    134: (57,),
    135: (11,),
    136: (2, 3, 5),
    137: (21,),
    138: (1, 7, 8),
    139: (3, 5, 8),
    140: (15,),
    141: (1, 4, 10),
    142: (21,),
    143: (2, 3, 5),
    144: (2, 4, 7),
    145: (52,),
    146: (71,),
    147: (14,),
    148: (27,),
    149: (7, 9, 10),
    150: (53,),
    151: (3,),
    152: (2, 3, 6),
    153: (1,),
    154: (15,),
    155: (62,),
    156: (9,),
    157: (2, 5, 6),
    158: (5, 6, 8),
    159: (31,),
    160: (2, 3, 5),
    161: (18,),
    162: (27,),
    163: (3, 6, 7),
    164: (7, 8, 10),
    165: (3, 8, 9),
    166: (37,),
    167: (6,),
    168: (2, 3, 15),
    169: (34,),
    170: (11,),
    171: (2, 5, 6),
    172: (1,),
    173: (2, 5, 8),
    174: (13,),
    175: (6,),
    176: (2, 3, 11),
    177: (8,),
    178: (31,),
    179: (1, 2, 4),
    180: (3,),
    181: (1, 6, 7),
    182: (81,),
    183: (56,),
    184: (7, 8, 9),
    185: (24,),
    186: (11,),
    187: (5, 6, 7),
    188: (2, 5, 6),
    189: (2, 5, 6),
    190: (6, 7, 8),
    191: (9,),
    192: (1, 2, 7),
    193: (15,),
    194: (87,),
    195: (2, 3, 8),
    196: (3,),
    197: (2, 4, 9),
    198: (9,),
    199: (34,),
    200: (2, 3, 5),
    201: (14,),
    202: (55,),
    203: (1, 7, 8),
    204: (27,),
    205: (2, 5, 9),
    206: (5, 9, 10),
    207: (43,),
    208: (1, 3, 9),
    209: (6,),
    210: (7,),
    211: (8, 10, 11),
    212: (105,),
    213: (2, 5, 6),
    214: (73,),
    215: (23,),
    216: (1, 3, 7),
    217: (45,),
    218: (11,),
    219: (1, 4, 8),
    220: (7,),
    221: (2, 6, 8),
    222: (2, 4, 5),
    223: (33,),
    224: (3, 8, 9),
    225: (32,),
    226: (3, 7, 10),
    227: (4, 9, 10),
    228: (113,),
    229: (1, 4, 10),
    230: (6, 7, 8),
    231: (26,),
    232: (2, 4, 9),
    233: (74,),
    234: (31,),
    235: (1, 6, 9),
    236: (5,),
    237: (1, 4, 7),
    238: (73,),
    239: (36,),
    240: (3, 5, 8),
    241: (70,),
    242: (95,),
    243: (1, 5, 8),
    244: (111,),
    245: (1, 4, 6),
    246: (1, 2, 11),
    247: (82,),
    248: (10, 14, 15),
    249: (35,),
    250: (103,),
    251: (2, 4, 7),
    252: (15,),
    253: (46,),
    254: (1, 2, 7),
    255: (52,),
    256: (2, 5, 10),
    257: (12,),
    258: (71,),
    259: (2, 6, 10),
    260: (15,),
    261: (4, 6, 7),
    262: (4, 8, 9),
    263: (93,),
    264: (2, 6, 9),
    265: (42,),
    266: (47,),
    267: (3, 6, 8),
    268: (25,),
    269: (1, 6, 7),
    270: (53,),
    271: (58,),
    272: (2, 3, 9),
    273: (23,),
    274: (67,),
    275: (9, 10, 11),
    276: (63,),
    277: (3, 6, 12),
    278: (5,),
    279: (5,),
    280: (2, 5, 9),
    281: (93,),
    282: (35,),
    283: (5, 7, 12),
    284: (53,),
    285: (5, 7, 10),
    286: (69,),
    287: (71,),
    288: (1, 10, 11),
    289: (21,),
    290: (2, 3, 5),
    291: (5, 11, 12),
    292: (37,),
    293: (1, 6, 11),
    294: (33,),
    295: (48,),
    296: (2, 3, 7),
    297: (5,),
    298: (4, 8, 11),
    299: (4, 6, 11),
    300: (5,),
    301: (2, 5, 9),
    302: (41,),
    303: (1,),
    304: (1, 2, 11),
    305: (102,),
    306: (1, 3, 7),
    307: (2, 4, 8),
    308: (15,),
    309: (4, 6, 10),
    310: (93,),
    311: (3, 5, 7),
    312: (4, 7, 9),
    313: (79,),
    314: (15,),
    315: (1, 9, 10),
    316: (63,),
    317: (2, 4, 7),
    318: (45,),
    319: (36,),
    320: (1, 3, 4),
    321: (31,),
    322: (67,),
    323: (1, 3, 10),
    324: (51,),
    325: (2, 5, 10),
    326: (1, 3, 10),
    327: (34,),
    328: (1, 3, 8),
    329: (50,),
    330: (99,),
    331: (2, 6, 10),
    332: (89,),
    333: (2,),
    334: (1, 2, 5),
    335: (2, 7, 10),
    336: (1, 4, 7),
    337: (55,),
    338: (1, 3, 4),
    339: (7, 10, 16),
    340: (45,),
    341: (6, 8, 10),
    342: (125,),
    343: (75,),
    344: (1, 2, 7),
    345: (22,),
    346: (63,),
    347: (3, 10, 11),
    348: (103,),
    349: (2, 5, 6),
    350: (53,),
    351: (34,),
    352: (6, 11, 13),
    353: (69,),
    354: (99,),
    355: (1, 5, 6),
    356: (7, 9, 10),
    357: (2, 10, 11),
    358: (57,),
    359: (68,),
    360: (2, 3, 5),
    361: (1, 4, 7),
    362: (63,),
    363: (3, 5, 8),
    364: (9,),
    365: (5, 6, 9),
    366: (29,),
    367: (21,),
    368: (2, 3, 7),
    369: (91,),
    370: (139,),
    371: (2, 3, 8),
    372: (111,),
    373: (2, 7, 8),
    374: (5, 6, 8),
    375: (16,),
    376: (5, 7, 8),
    377: (41,),
    378: (43,),
    379: (5, 8, 10),
    380: (47,),
    381: (1, 2, 5),
    382: (81,),
    383: (90,),
    384: (2, 3, 12),
    385: (6,),
    386: (83,),
    387: (1, 7, 8),
    388: (159,),
    389: (5, 9, 10),
    390: (9,),
    391: (28,),
    392: (6, 10, 13),
    393: (7,),
    394: (135,),
    395: (5, 6, 11),
    396: (25,),
    397: (6, 7, 12),
    398: (2, 6, 7),
    399: (26,),
    400: (2, 3, 5),
    401: (152,),
    402: (171,),
    403: (5, 8, 9),
    404: (65,),
    405: (2, 8, 13),
    406: (141,),
    407: (71,),
    408: (2, 3, 5),
    409: (87,),
    410: (3, 4, 10),
    411: (3, 10, 12),
    412: (147,),
    413: (6, 7, 10),
    414: (13,),
    415: (102,),
    416: (2, 5, 9),
    417: (107,),
    418: (199,),
    419: (4, 5, 15),
    420: (7,),
    421: (2, 4, 5),
    422: (149,),
    423: (25,),
    424: (2, 7, 9),
    425: (12,),
    426: (63,),
    427: (5, 6, 11),
    428: (105,),
    429: (7, 8, 10),
    430: (1, 6, 14),
    431: (120,),
    432: (3, 4, 13),
    433: (33,),
    434: (5, 11, 12),
    435: (5, 9, 12),
    436: (165,),
    437: (1, 2, 6),
    438: (65,),
    439: (49,),
    440: (1, 3, 4),
    441: (7,),
    442: (2, 5, 7),
    443: (1, 6, 10),
    444: (81,),
    445: (4, 6, 7),
    446: (105,),
    447: (73,),
    448: (4, 6, 11),
    449: (134,),
    450: (47,),
    451: (1, 10, 16),
    452: (4, 5, 6),
    453: (4, 6, 15),
    454: (1, 6, 8),
    455: (38,),
    456: (6, 9, 18),
    457: (16,),
    458: (203,),
    459: (2, 5, 12),
    460: (19,),
    461: (1, 6, 7),
    462: (73,),
    463: (93,),
    464: (13, 18, 19),
    465: (31,),
    466: (6, 11, 14),
    467: (1, 6, 11),
    468: (27,),
    469: (2, 5, 9),
    470: (9,),
    471: (1,),
    472: (2, 3, 11),
    473: (200,),
    474: (191,),
    475: (4, 8, 9),
    476: (9,),
    477: (7, 15, 16),
    478: (121,),
    479: (104,),
    480: (6, 9, 15),
    481: (138,),
    482: (5, 6, 9),
    483: (4, 6, 9),
    484: (105,),
    485: (6, 16, 17),
    486: (81,),
    487: (94,),
    488: (1, 3, 4),
    489: (83,),
    490: (219,),
    491: (3, 6, 11),
    492: (7,),
    493: (3, 5, 10),
    494: (17,),
    495: (76,),
    496: (2, 5, 16),
    497: (78,),
    498: (155,),
    499: (5, 6, 11),
    500: (27,),
    501: (2, 4, 5),
    502: (4, 5, 8),
    503: (3,),
    504: (6, 14, 15),
    505: (156,),
    506: (23,),
    507: (3, 6, 13),
    508: (9,),
    509: (3, 7, 8),
    510: (69,),
    511: (10,),
    512: (2, 5, 8),
}
